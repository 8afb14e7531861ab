//! The displayed Jacobian shapes of the nilpotent classifications.

use crate::algebra::Field;
use crate::error::Result;

use super::pattern::Pattern;

fn grid(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

/// Rows of the display padded to n columns and n rows; padded cells are
/// zero, or stars where the display continues a star block.
fn padded(rows: &[(&[&str], &str)], n: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = rows
        .iter()
        .map(|(head, fill)| {
            let mut r: Vec<String> = head.iter().map(|s| s.to_string()).collect();
            r.resize(n, fill.to_string());
            r
        })
        .collect();
    out.resize(n, vec!["0".to_string(); n]);
    out
}

pub fn dim5_patterns(f: &Field) -> Result<Vec<Pattern>> {
    let p1 = grid(&[
        &["0", "0", "0", "0", "0"],
        &["*", "0", "0", "0", "0"],
        &["0", "x4", "0", "x2", "0"],
        &["x3", "-x5", "x1", "0", "-x2"],
        &["*", "*", "0", "x1", "0"],
    ]);
    let p2 = grid(&[
        &["0", "0", "0", "0", "0"],
        &["*", "0", "0", "x4", "0"],
        &["x2", "x1", "0", "-x5", "-x4"],
        &["x3", "0", "x1", "0", "x5"],
        &["*", "0", "0", "x1", "0"],
    ]);
    Ok(vec![Pattern::parse(f, "dim5-1", &p1)?, Pattern::parse(f, "dim5-2", &p2)?])
}

/// The four displays with c ∈ {0, 1}; the second display appears once per c.
pub fn dim6_patterns(f: &Field) -> Result<Vec<(usize, Option<u64>, Pattern)>> {
    let p1 = grid(&[
        &["0", "0", "0", "0", "0", "0"],
        &["0", "0", "0", "0", "0", "0"],
        &["x2", "x1", "0", "0", "0", "0"],
        &["0", "0", "x5", "0", "x3", "0"],
        &["*", "*", "*", "x2", "0", "-x3"],
        &["*", "*", "*", "0", "x2", "0"],
    ]);
    let p2 = |c: u64| {
        let (a, b, cc) = if c == 0 {
            ("-x6", "0", "0")
        } else {
            ("-x5 - x6", "-x2", "x2")
        };
        let d = if c == 0 { "0" } else { "x6" };
        grid(&[
            &["0", "0", "0", "0", "0", "0"],
            &["0", "0", "0", "0", "0", "0"],
            &["0", "x5", "0", "0", "x2", "0"],
            &["x3", a, "x1", "0", b, "-x2"],
            &["x4", d, "0", "x1", "0", cc],
            &["x5", "0", "0", "0", "x1", "0"],
        ])
    };
    let p3 = grid(&[
        &["0", "0", "0", "0", "0", "0"],
        &["0", "0", "0", "0", "0", "0"],
        &["0", "x4", "0", "x2", "0", "0"],
        &["x3", "-x5", "x1", "0", "-x2", "0"],
        &["x4", "0", "0", "x1", "0", "0"],
        &["*", "*", "*", "*", "*", "0"],
    ]);
    let p4 = grid(&[
        &["0", "0", "0", "0", "0", "0"],
        &["0", "0", "0", "x5", "x4", "0"],
        &["x2", "x1", "0", "-x6", "-2*x5", "-x4"],
        &["x3", "0", "x1", "0", "x6", "x5"],
        &["x4", "0", "0", "x1", "0", "0"],
        &["x5", "0", "0", "0", "x1", "0"],
    ]);
    Ok(vec![
        (1, None, Pattern::parse(f, "dim6-1", &p1)?),
        (2, Some(0), Pattern::parse(f, "dim6-2 c=0", &p2(0))?),
        (2, Some(1), Pattern::parse(f, "dim6-2 c=1", &p2(1))?),
        (3, None, Pattern::parse(f, "dim6-3", &p3)?),
        (4, None, Pattern::parse(f, "dim6-4", &p4)?),
    ])
}

/// Second display of the nilpotent rank-3 classification, n ≥ 5.
pub fn rk3np_pattern2(f: &Field, n: usize) -> Result<Pattern> {
    let rows = padded(
        &[
            (&["0", "x5", "0"], "*"),
            (&["x4", "0", "-x5"], "*"),
            (&["0", "x4", "0"], "*"),
        ],
        n,
    );
    Pattern::parse(f, "rk3np-2", &rows)
}

/// Third display, n ≥ 6 and characteristic 2.
pub fn rk3np_pattern3(f: &Field, n: usize) -> Result<Pattern> {
    let rows = padded(
        &[
            (&["0", "x6", "0", "0", "0", "x2"], "0"),
            (&["x5", "0", "-x6", "0", "*", "*"], "*"),
            (&["0", "x5", "0", "0", "x2", "0"], "0"),
            (&["0", "0", "0", "0", "x6", "x5"], "0"),
        ],
        n,
    );
    Pattern::parse(f, "rk3np-3", &rows)
}
