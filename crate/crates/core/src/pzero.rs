//! The Weierstrass semigroup at P_0 = (0, 0, 0).
//!
//! Its elements below 2g are assembled from seven explicit families of pole
//! orders of `y^r z^t / x^s`; an independent route collects all such pole
//! orders and closes them under addition.

use crate::curve::{CurveError, CurveParams};
use crate::semigroup::Semigroup;
use num_rational::Rational64;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PzeroError {
    #[error("H(P_0) consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("cardinality formula for L{index} is not an integer: {value}")]
    NonIntegralCardinality { index: usize, value: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// The seven sets L1..L7, materialized from their index ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LSets {
    pub q: u64,
    pub n: u64,
    pub m: u64,
    pub genus: u64,
    /// `sets[i]` is L_{i+1}, ascending.
    pub sets: Vec<Vec<i64>>,
    /// Union of all seven, ascending.
    pub union: Vec<i64>,
}

impl LSets {
    /// Elements outside `[0, 2g - 1]`, as `(set number 1..=7, value)`.
    pub fn out_of_window(&self) -> Vec<(usize, i64)> {
        let top = 2 * self.genus as i64 - 1;
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                s.iter()
                    .filter(move |&&v| v < 0 || v > top)
                    .map(move |&v| (i + 1, v))
            })
            .collect()
    }

    /// Pairs `(i, j)` (1-based, i < j) of sets that intersect.
    pub fn overlaps(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..7 {
            let a: BTreeSet<i64> = self.sets[i].iter().copied().collect();
            for j in i + 1..7 {
                if self.sets[j].iter().any(|v| a.contains(v)) {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn sizes(&self) -> [usize; 7] {
        let mut out = [0; 7];
        for (o, s) in out.iter_mut().zip(&self.sets) {
            *o = s.len();
        }
        out
    }

    /// The union restricted to `[0, 2g - 1]`.
    pub fn union_in_window(&self) -> Vec<u64> {
        let top = 2 * self.genus as i64 - 1;
        self.union
            .iter()
            .filter(|&&v| (0..=top).contains(&v))
            .map(|&v| v as u64)
            .collect()
    }
}

/// `(m - q^2 + q - 1) / q^3` as an exact rational.
fn slope(q: i64, m: i64) -> Rational64 {
    Rational64::new(m - q * q + q - 1, q * q * q)
}

/// Upper end of the t-range `((s - r) q + s) * slope + s - r`, floored.
fn t_max(q: i64, m: i64, s: i64, r: i64) -> i64 {
    let v = Rational64::from_integer((s - r) * q + s) * slope(q, m) + Rational64::from_integer(s - r);
    v.floor().to_integer()
}

pub fn build_lsets(q: u64, n: u64) -> Result<LSets, PzeroError> {
    let c = CurveParams::new(q, n)?;
    let (qi, m) = (q as i64, c.m as i64);
    let q2 = qi * qi;
    let val = |s: i64, r: i64, t: i64| -t - r * m + m * (qi + 1) * s;
    let mut sets: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); 7];
    // Empty ranges (upper end below lower end) contribute nothing.
    for s in 0..=qi {
        for r in 0..=s {
            for t in 0..=t_max(qi, m, s, r) {
                sets[0].insert(val(s, r, t));
            }
        }
    }
    for s in qi + 1..=q2 - qi {
        for r in 0..=qi {
            for t in 0..=t_max(qi, m, s, r) {
                sets[1].insert(val(s, r, t));
            }
        }
    }
    for s in q2 - qi + 1..=q2 - 2 {
        for r in 0..=qi + s - q2 - 1 {
            for t in 0..m {
                sets[2].insert(val(s, r, t));
            }
        }
        for r in qi + s - q2..=qi {
            for t in 0..=t_max(qi, m, s, r) {
                sets[3].insert(val(s, r, t));
            }
        }
    }
    let top = q2 - 1;
    for t in qi * q2..m {
        sets[4].insert(val(top, 0, t));
    }
    for r in 1..=qi - 2 {
        for t in 0..m {
            sets[5].insert(val(top, r, t));
        }
    }
    for r in qi - 1..=qi {
        for t in 0..=t_max(qi, m, top, r) {
            sets[6].insert(val(top, r, t));
        }
    }
    let union: BTreeSet<i64> = sets.iter().flatten().copied().collect();
    Ok(LSets {
        q,
        n,
        m: c.m,
        genus: c.genus,
        sets: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        union: union.into_iter().collect(),
    })
}

/// The seven closed-form counts |L1|..|L7|, exactly as rationals.
pub fn lset_cardinalities_exact(q: u64, n: u64) -> Result<[Rational64; 7], PzeroError> {
    let c = CurveParams::new(q, n)?;
    let (q, m) = (q as i64, c.m as i64);
    let r = |a: i64, b: i64| Rational64::new(a, b);
    let int = Rational64::from_integer;
    let f = slope(q, m);
    let (q2, q3, q4, q5, q6) = (q * q, q.pow(3), q.pow(4), q.pow(5), q.pow(6));
    Ok([
        r(q4 + 5 * q3 + 8 * q2 + 4 * q, 6) * f + r((q + 1) * (q + 2) * (q + 3), 6),
        r(q6 - q5 - q4 - 3 * q2 - 2 * q, 2) * f + r(q5 - 2 * q4 + 2 * q3 - q2 - 6 * q, 2),
        r(m * (q - 2) * (q - 1), 2),
        r(3 * q5 + 2 * q4 - 20 * q3 + q2 + 8 * q + 12, 6) * f
            + r(3 * q4 - q3 - 18 * q2 + 22 * q - 12, 6),
        int(m - q3),
        int((q - 2) * m),
        f * int(2 * q3 - q - 2) + int(2 * q2 - 2 * q + 1),
    ])
}

/// The seven closed-form counts as integers; errors if any is fractional.
pub fn lset_cardinalities(q: u64, n: u64) -> Result<[i64; 7], PzeroError> {
    let exact = lset_cardinalities_exact(q, n)?;
    let mut out = [0; 7];
    for (i, v) in exact.iter().enumerate() {
        if !v.is_integer() {
            return Err(PzeroError::NonIntegralCardinality {
                index: i + 1,
                value: v.to_string(),
            });
        }
        out[i] = v.to_integer();
    }
    Ok(out)
}

/// H(P_0): the L-set union inside `[0, 2g - 1]`, plus every integer from 2g on.
pub fn h_p0(q: u64, n: u64) -> Result<Semigroup, PzeroError> {
    let ls = build_lsets(q, n)?;
    let g = ls.genus;
    let small = ls.union_in_window();
    if small.len() as u64 != g {
        return Err(PzeroError::ConsistencyFailure(format!(
            "{} elements below 2g, expected g = {g}",
            small.len()
        )));
    }
    let member: BTreeSet<u64> = small.iter().copied().collect();
    for &a in &small {
        for &b in small.iter().filter(|&&b| b >= a && a + b < 2 * g) {
            if !member.contains(&(a + b)) {
                return Err(PzeroError::ConsistencyFailure(format!(
                    "{a} + {b} is missing"
                )));
            }
        }
    }
    Semigroup::from_elements_below(&small, 2 * g)
        .map_err(|e| PzeroError::ConsistencyFailure(e.to_string()))
}

/// Independent reconstruction of H(P_0) below 2g: the P_0 pole orders
/// `m(q+1)s - mr - t` of all `y^r z^t / x^s` that are regular at P_inf,
/// closed under addition.
pub fn p0_oracle(q: u64, n: u64) -> Result<Vec<u64>, PzeroError> {
    let c = CurveParams::new(q, n)?;
    let (q, m) = (q as i64, c.m as i64);
    let top = 2 * c.genus as i64 - 1;
    let mut member = vec![false; (top + 1) as usize];
    member[0] = true;
    for s in 0..q * q {
        for r in 0..=s {
            let t_hi = (s * m * (q + 1) - r * q * m).div_euclid(q * q * q);
            for t in 0..=t_hi {
                let v = m * (q + 1) * s - m * r - t;
                if (0..=top).contains(&v) {
                    member[v as usize] = true;
                }
            }
        }
    }
    for v in 1..=top as usize {
        if !member[v] {
            member[v] = (1..=v / 2).any(|a| member[a] && member[v - a]);
        }
    }
    Ok((0..=top as u64).filter(|&v| member[v as usize]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P0_DISPLAY_25: &[u64] = &[
        0, 21, 22, 29, 30, 31, 32, 33, 42, 43, 44, 50, 51, 52, 53, 54, 55, 58, 59, 60, 61, 62, 63,
        64, 65, 66, 71, 72, 73, 74, 75, 76, 77,
    ];

    #[test]
    fn lsets_q2_n5() {
        let ls = build_lsets(2, 5).unwrap();
        assert_eq!(&ls.union[..11], &[0, 21, 22, 29, 30, 31, 32, 33, 42, 43, 44]);
        assert!(ls.sets[0].contains(&0));
        assert_eq!(ls.union.len(), 46);
        assert!(ls.overlaps().is_empty());
        assert!(ls.out_of_window().is_empty());
        assert_eq!(ls.sizes(), [26, 0, 0, 0, 3, 0, 17]);
        let mut expected: Vec<u64> = P0_DISPLAY_25.to_vec();
        expected.extend(79..92);
        assert_eq!(ls.union_in_window(), expected);
    }

    #[test]
    fn cardinality_examples() {
        let c = lset_cardinalities(2, 5).unwrap();
        assert_eq!(c[2], 0);
        assert_eq!(c[4], 3);
        assert_eq!(c[5], 0);
        assert_eq!(c, [26, 0, 0, 0, 3, 0, 17]);
        let c = lset_cardinalities(2, 7).unwrap();
        assert_eq!(c, [90, 0, 0, 0, 35, 0, 65]);
    }

    #[test]
    fn cardinalities_match_enumeration_q2() {
        for n in [5, 7, 9, 11] {
            let ls = build_lsets(2, n).unwrap();
            let c = lset_cardinalities(2, n).unwrap();
            let sizes = ls.sizes();
            for i in 0..7 {
                assert_eq!(c[i], sizes[i] as i64, "n={n} L{}", i + 1);
            }
            assert_eq!(ls.union.len() as u64, ls.genus);
            assert!(ls.overlaps().is_empty());
        }
    }

    #[test]
    fn n3_sets_leave_the_window() {
        let ls = build_lsets(3, 3).unwrap();
        assert_eq!(ls.sizes(), [20, 54, 7, 18, 0, 7, 13]);
        assert_eq!(lset_cardinalities(3, 3).unwrap()[4], -20);
        assert!(!ls.out_of_window().is_empty());
        assert_eq!(ls.union_in_window().len(), 99);
    }

    #[test]
    fn h_p0_matches_display() {
        let s = h_p0(2, 5).unwrap();
        assert!(s.contains(0));
        assert_eq!(s.genus(), 46);
        let mut expected: Vec<u64> = P0_DISPLAY_25.to_vec();
        expected.extend(79..=100);
        assert_eq!(s.elements_upto(100), expected);
        assert_eq!(s.conductor(), 79);
    }

    #[test]
    fn oracle_agrees_with_lsets() {
        for (q, n) in [(2, 5), (2, 7), (2, 9), (3, 3), (4, 3), (5, 3), (3, 5)] {
            let ls = build_lsets(q, n).unwrap();
            let oracle = p0_oracle(q, n).unwrap();
            assert_eq!(oracle, ls.union_in_window(), "q={q} n={n}");
            assert_eq!(oracle.len() as u64, ls.genus);
            let s = h_p0(q, n).unwrap();
            assert_eq!(s.genus(), ls.genus);
        }
    }

    #[test]
    fn json_export() {
        let v = serde_json::to_value(build_lsets(2, 5).unwrap()).unwrap();
        assert_eq!(v["sets"].as_array().unwrap().len(), 7);
        assert_eq!(v["union"][1], 21);
    }
}
