//! Numeric evaluation of the asymptotic bounds on `f_{s,t}^{(k)}(n)`, with every
//! hidden constant set to 1. These are curve shapes, not certified values.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::compute_m;

pub const CONSTANTS_NOTE: &str =
    "shape only: all asymptotic constants and o(1) terms set to 1 (unspecified); logs natural except m_base2";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub value: Option<f64>,
    pub applicable: bool,
    /// Why the entry is inapplicable, when it is.
    pub note: Option<String>,
}

impl BoundEntry {
    fn value(v: f64) -> Self {
        BoundEntry {
            value: Some(v),
            applicable: true,
            note: None,
        }
    }

    fn inapplicable(note: impl Into<String>) -> Self {
        BoundEntry {
            value: None,
            applicable: false,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u64,
    pub k: usize,
    pub s: usize,
    pub t: usize,
    /// `⌊√(log₂ n)⌋`, the length of the extracted sequence.
    pub m_base2: usize,
    /// `⌊√(ln n)⌋`.
    pub m_natural: usize,
    /// `(ln n)^{1/4} (ln ln n / ln ln ln n)^{1/2}`; 3-graphs with `t = s + 1`.
    pub lower_theorem1: BoundEntry,
    /// `ln n`; 3-graphs.
    pub upper_theorem1: BoundEntry,
    /// `(ln n)^{1/(k−2)}`.
    pub eq3_upper: BoundEntry,
    /// `(log^{(k−2)} n)^{1/4}`; `t = s + 1`.
    pub eq4_lower: BoundEntry,
    /// `(log^{(k−2)} n)^{1/3}`; `t = s + 1`.
    pub cfs_lower: BoundEntry,
    pub constants_note: String,
}

/// `ln` applied `times` times, or `None` once an argument drops to 1 or below.
pub fn iterated_ln(x: f64, times: usize) -> Option<f64> {
    let mut x = x;
    for _ in 0..times {
        if x <= 1.0 {
            return None;
        }
        x = x.ln();
    }
    Some(x)
}

pub fn theorem_bounds(n: u64, k: usize, s: usize, t: usize) -> Result<BoundsReport> {
    if n < 3 || k < 3 || s < k || t <= s {
        return Err(Error::InvalidParameters(format!(
            "need n >= 3, k >= 3, k <= s < t; got n = {n}, k = {k}, s = {s}, t = {t}"
        )));
    }
    let x = n as f64;
    let ln = x.ln();
    let adjacent = t == s + 1;

    let lower_theorem1 = if k != 3 {
        BoundEntry::inapplicable("3-graphs only")
    } else if !adjacent {
        BoundEntry::inapplicable("requires t = s + 1")
    } else {
        match iterated_ln(x, 3).filter(|&l3| l3 > 0.0) {
            Some(l3) => BoundEntry::value(ln.powf(0.25) * (ln.ln() / l3).sqrt()),
            None => BoundEntry::inapplicable("ln ln ln n <= 0 (n <= e^e)"),
        }
    };
    let upper_theorem1 = if k == 3 {
        BoundEntry::value(ln)
    } else {
        BoundEntry::inapplicable("3-graphs only")
    };
    let eq3_upper = BoundEntry::value(ln.powf(1.0 / (k as f64 - 2.0)));
    let iterated = |exponent: f64| {
        if !adjacent {
            return BoundEntry::inapplicable("requires t = s + 1");
        }
        match iterated_ln(x, k - 2) {
            Some(v) => BoundEntry::value(v.powf(exponent)),
            None => BoundEntry::inapplicable("an iterated logarithm is not positive"),
        }
    };

    Ok(BoundsReport {
        n,
        k,
        s,
        t,
        m_base2: compute_m(n as usize)?,
        m_natural: ln.sqrt().floor() as usize,
        lower_theorem1,
        upper_theorem1,
        eq3_upper,
        eq4_lower: iterated(0.25),
        cfs_lower: iterated(1.0 / 3.0),
        constants_note: CONSTANTS_NOTE.to_string(),
    })
}

#[derive(Serialize)]
struct CsvRow {
    n: u64,
    k: usize,
    s: usize,
    t: usize,
    m_base2: usize,
    m_natural: usize,
    lower_theorem1: Option<f64>,
    lower_theorem1_applicable: bool,
    upper_theorem1: Option<f64>,
    upper_theorem1_applicable: bool,
    eq3_upper: Option<f64>,
    eq3_upper_applicable: bool,
    eq4_lower: Option<f64>,
    eq4_lower_applicable: bool,
    cfs_lower: Option<f64>,
    cfs_lower_applicable: bool,
}

/// One row per report; inapplicable values are empty cells.
pub fn write_csv<W: Write>(reports: &[BoundsReport], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow {
            n: r.n,
            k: r.k,
            s: r.s,
            t: r.t,
            m_base2: r.m_base2,
            m_natural: r.m_natural,
            lower_theorem1: r.lower_theorem1.value,
            lower_theorem1_applicable: r.lower_theorem1.applicable,
            upper_theorem1: r.upper_theorem1.value,
            upper_theorem1_applicable: r.upper_theorem1.applicable,
            eq3_upper: r.eq3_upper.value,
            eq3_upper_applicable: r.eq3_upper.applicable,
            eq4_lower: r.eq4_lower.value,
            eq4_lower_applicable: r.eq4_lower.applicable,
            cfs_lower: r.cfs_lower.value,
            cfs_lower_applicable: r.cfs_lower.applicable,
        })?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(entry: &BoundEntry, expected: f64) -> bool {
        entry.applicable && (entry.value.unwrap() - expected).abs() < 0.01
    }

    #[test]
    fn million_vertices() {
        let r = theorem_bounds(1_000_000, 3, 3, 4).unwrap();
        assert!(close(&r.lower_theorem1, 3.18), "{:?}", r.lower_theorem1);
        assert!(close(&r.upper_theorem1, 13.82));
        assert_eq!(r.m_base2, 4);
        assert_eq!(r.m_natural, 3);
        assert!(close(&r.eq3_upper, 13.82));
        assert_eq!(r.constants_note, CONSTANTS_NOTE);

        let r = theorem_bounds(1_000_000, 4, 4, 5).unwrap();
        assert!(close(&r.eq3_upper, 3.72));
        assert!(close(&r.eq4_lower, 1.27));
        assert!(!r.lower_theorem1.applicable && r.lower_theorem1.value.is_none());
    }

    #[test]
    fn small_n_is_flagged() {
        let r = theorem_bounds(10, 3, 3, 4).unwrap();
        assert!(!r.lower_theorem1.applicable);
        assert!(r.lower_theorem1.note.is_some());
        let r = theorem_bounds(10, 5, 5, 6).unwrap();
        // ln 10 > 1 but ln ln 10 < 1
        assert!(!r.eq4_lower.applicable);
    }

    #[test]
    fn non_adjacent_orders() {
        let r = theorem_bounds(1_000_000, 3, 3, 5).unwrap();
        assert!(!r.lower_theorem1.applicable && !r.eq4_lower.applicable && !r.cfs_lower.applicable);
        assert!(r.upper_theorem1.applicable && r.eq3_upper.applicable);
    }

    #[test]
    fn rejects_bad_parameters() {
        for (n, k, s, t) in [(2, 3, 3, 4), (100, 2, 2, 3), (100, 3, 2, 4), (100, 3, 4, 4)] {
            assert_eq!(theorem_bounds(n, k, s, t).unwrap_err().name(), "InvalidParameters");
        }
    }

    #[test]
    fn lower_below_upper_on_grid() {
        for e in 2..=12 {
            let r = theorem_bounds(10u64.pow(e), 3, 3, 4).unwrap();
            assert!(r.lower_theorem1.value.unwrap() < r.upper_theorem1.value.unwrap());
        }
    }

    #[test]
    fn eq3_is_increasing() {
        for k in 3..=6 {
            let values: Vec<f64> = (2..=12)
                .map(|e| theorem_bounds(10u64.pow(e), k, k, k + 1).unwrap().eq3_upper.value.unwrap())
                .collect();
            assert!(values.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn csv_has_empty_cells_for_inapplicable() {
        let reports = vec![theorem_bounds(10, 3, 3, 4).unwrap(), theorem_bounds(1000, 3, 3, 4).unwrap()];
        let mut buf = Vec::new();
        write_csv(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("n,k,s,t,m_base2,m_natural,lower_theorem1,lower_theorem1_applicable"));
        assert!(lines[1].starts_with("10,3,3,4,1,1,,false,"));
    }
}
