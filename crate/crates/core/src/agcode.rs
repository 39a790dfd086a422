//! One-point evaluation codes on GGS(q, n) and the parameters of their duals.

use crate::curve::{AffinePoint, Curve, CurveError, CurveParams, Monomial};
use crate::ffield::{Elem, Field};
use crate::linalg::{RowEchelon, Rref};
use crate::pzero::{self, PzeroError};
use crate::qtwo::{self, DordClosed, DordOptions};
use crate::semigroup::{Semigroup, SemigroupError};
use num_rational::Rational64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use std::fmt::Write as _;
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgError {
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { expected: usize, rank: usize },
    #[error("divisor degree {degree} is not below the length {length}")]
    DegreeTooLarge { degree: u64, length: u64 },
    #[error("index {0} is out of range for this code family")]
    IndexBeyondBound(u64),
    #[error("point list has {got} points, expected {expected}")]
    WrongPointCount { expected: u64, got: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Pzero(#[from] PzeroError),
}

/// Monomials `x^a y^b z^c` with `b <= q`, `c <= m - 1` and pole order at most
/// `l` at P_inf, sorted by pole order.
pub fn rr_basis_infinity(l: u64, params: &CurveParams) -> Vec<Monomial> {
    let [ox, oy, oz] = params.generator_pole_orders();
    let mut out = Vec::new();
    for b in 0..=params.q {
        for c in 0..params.m {
            let base = b * oy + c * oz;
            if base > l {
                break;
            }
            for a in 0..=(l - base) / ox {
                out.push(Monomial::new(a, b, c));
            }
        }
    }
    out.sort_by_key(|&mono| params.pole_order_infinity(mono));
    out
}

/// The evaluation code C(D, l P_inf) over the canonical affine point order.
#[derive(Clone, Debug)]
pub struct EvalCode {
    /// Degree as requested.
    pub l_requested: u64,
    /// Largest nongap not above `l_requested`.
    pub l: u64,
    pub basis: Vec<Monomial>,
    pub pole_orders: Vec<u64>,
    pub rows: Vec<Vec<Elem>>,
    pub rank: usize,
}

impl EvalCode {
    pub fn length(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn dimension(&self) -> usize {
        self.rank
    }

    /// Goppa designed distance N - l.
    pub fn designed_distance(&self) -> i64 {
        self.length() as i64 - self.l as i64
    }

    pub fn echelon<'f>(&self, field: &'f Field) -> RowEchelon<'f> {
        RowEchelon::from_rows(field, self.length(), &self.rows)
    }

    /// Rows as discrete-log indices, -1 for zero.
    pub fn matrix_log_rows(&self, field: &Field) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&e| field.log_key(e)).collect())
            .collect()
    }

    /// One matrix row per line, comma-separated log indices.
    pub fn matrix_csv(&self, field: &Field) -> String {
        let mut out = String::new();
        for row in self.matrix_log_rows(field) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }
}

fn eval_row(curve: &Curve, points: &[AffinePoint], mono: Monomial) -> Vec<Elem> {
    points
        .iter()
        .map(|pt| curve.eval_monomial_affine(pt, mono))
        .collect()
}

fn check_points(curve: &Curve, points: &[AffinePoint]) -> Result<(), AgError> {
    let expected = curve.params().n_affine;
    if points.len() as u64 != expected {
        return Err(AgError::WrongPointCount {
            expected,
            got: points.len(),
        });
    }
    Ok(())
}

pub fn build_code(curve: &Curve, points: &[AffinePoint], l: u64) -> Result<EvalCode, AgError> {
    check_points(curve, points)?;
    let params = curve.params();
    let length = points.len() as u64;
    if l >= length {
        return Err(AgError::DegreeTooLarge { degree: l, length });
    }
    let basis = rr_basis_infinity(l, params);
    let pole_orders: Vec<u64> = basis.iter().map(|&b| params.pole_order_infinity(b)).collect();
    let rows: Vec<Vec<Elem>> = basis.iter().map(|&b| eval_row(curve, points, b)).collect();
    let rank = RowEchelon::from_rows(curve.field(), points.len(), &rows).rank();
    if rank != basis.len() {
        return Err(AgError::RankDeficient {
            expected: basis.len(),
            rank,
        });
    }
    Ok(EvalCode {
        l_requested: l,
        l: pole_orders.last().copied().unwrap_or(0),
        basis,
        pole_orders,
        rows,
        rank,
    })
}

/// Ranks of C(D, rho P_inf) for every nongap `rho <= l_max`, built by adding
/// one basis row at a time. Returns `(rho, rank)` pairs.
pub fn rank_sweep(curve: &Curve, points: &[AffinePoint], l_max: u64) -> Result<Vec<(u64, usize)>, AgError> {
    check_points(curve, points)?;
    let params = curve.params();
    let mut e = RowEchelon::new(curve.field(), points.len());
    let mut out = Vec::new();
    for mono in rr_basis_infinity(l_max, params) {
        e.insert(eval_row(curve, points, mono));
        out.push((params.pole_order_infinity(mono), e.rank()));
    }
    Ok(out)
}

/// True iff every row of `small` lies in the row space of `big`.
pub fn containment(field: &Field, small: &EvalCode, big: &EvalCode) -> bool {
    let e = big.echelon(field);
    small.rows.iter().all(|r| e.contains(r))
}

/// Minimum weight seen among random nonzero words of the dual code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub rho: u64,
    pub samples: usize,
    pub seed: u64,
    pub min_weight: usize,
}

/// Samples `samples` nonzero dual codewords of `code`: each fixes a random
/// set of 1 to 8 free coordinates to random nonzero values and solves for the
/// pivot coordinates.
pub fn weight_falsification(field: &Field, code: &EvalCode, samples: usize, seed: u64) -> WeightReport {
    let rref: Rref = code.echelon(field).rref();
    let free = rref.free_columns();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_weight = usize::MAX;
    let max_support = free.len().min(8);
    for _ in 0..samples {
        let support = rng.gen_range(1..=max_support);
        let cols = sample(&mut rng, free.len(), support);
        let assignment: Vec<(usize, Elem)> = cols
            .iter()
            .map(|i| (free[i], Elem(rng.gen_range(1..field.size() as u32))))
            .collect();
        let word = rref.kernel_vector(field, &assignment);
        let w = word.iter().filter(|e| !e.is_zero()).count();
        min_weight = min_weight.min(w);
    }
    WeightReport {
        rho: code.l,
        samples,
        seed,
        min_weight,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Place {
    Infinity,
    P0,
}

/// How d_ORD is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DordSource {
    /// Direct counting on the semigroup.
    Oracle,
    /// The q = 2 closed forms where a published case applies, counting otherwise.
    ClosedWithFallback,
}

/// Where a reported d_ORD came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DordOrigin {
    Oracle,
    Closed(qtwo::DordCase),
}

fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCodeParams {
    /// 1-based index: C_l is dual to C(D, rho_l P).
    pub l_index: u64,
    pub rho: u64,
    pub length: u64,
    pub k_dual: u64,
    pub d_ord: u64,
    pub d_ord_origin: DordOrigin,
    /// `rho_l - 2g + 2`
    pub goppa_bound: i64,
    /// `N + 1 - k_dual - d_ord`
    pub delta: i64,
    #[serde(serialize_with = "ser_ratio")]
    pub relative_delta: Rational64,
}

/// The family of dual one-point codes C_l(P) of length N at one place.
#[derive(Clone, Debug)]
pub struct OnePointFamily {
    pub params: CurveParams,
    pub place: Place,
    pub semigroup: Semigroup,
}

impl OnePointFamily {
    pub fn new(q: u64, n: u64, place: Place) -> Result<OnePointFamily, AgError> {
        let params = CurveParams::new(q, n)?;
        let semigroup = match place {
            Place::Infinity => Semigroup::generate(&params.generator_pole_orders(), 0)?,
            Place::P0 => pzero::h_p0(q, n)?,
        };
        Ok(OnePointFamily {
            params,
            place,
            semigroup,
        })
    }

    pub fn length(&self) -> u64 {
        self.params.n_affine
    }

    /// Largest index whose `rho_l` is below the length.
    pub fn max_index(&self) -> u64 {
        let n = self.length();
        let g = self.semigroup.genus();
        // rho_l = l + g - 1 past the conductor
        n.saturating_sub(g)
    }

    fn check_index(&self, l: u64) -> Result<u64, AgError> {
        if l == 0 || l > self.max_index() {
            return Err(AgError::IndexBeyondBound(l));
        }
        let rho = self.semigroup.rho(l)?;
        if rho >= self.length() {
            return Err(AgError::IndexBeyondBound(l));
        }
        Ok(rho)
    }

    fn closed_form(&self, l: u64) -> Option<(u64, qtwo::DordCase)> {
        if self.place != Place::Infinity || self.params.q != 2 || self.params.n < 5 {
            return None;
        }
        let next = self.semigroup.rho(l + 1).ok()?;
        match qtwo::dord_closed(next, self.params.n, DordOptions::default()).ok()? {
            DordClosed::Value { value, case } => Some((value, case)),
            DordClosed::Unresolved => None,
        }
    }

    fn assemble(&self, l: u64, rho: u64, d_ord: u64, origin: DordOrigin) -> DualCodeParams {
        let n = self.length();
        let k_dual = n - l;
        let delta = n as i64 + 1 - k_dual as i64 - d_ord as i64;
        DualCodeParams {
            l_index: l,
            rho,
            length: n,
            k_dual,
            d_ord,
            d_ord_origin: origin,
            goppa_bound: rho as i64 - 2 * self.semigroup.genus() as i64 + 2,
            delta,
            relative_delta: Rational64::new(delta, n as i64),
        }
    }

    pub fn dual_params(&self, l: u64, source: DordSource) -> Result<DualCodeParams, AgError> {
        let rho = self.check_index(l)?;
        let (d, origin) = match source {
            DordSource::ClosedWithFallback => match self.closed_form(l) {
                Some((v, case)) => (v, DordOrigin::Closed(case)),
                None => (self.semigroup.dord(l), DordOrigin::Oracle),
            },
            DordSource::Oracle => (self.semigroup.dord(l), DordOrigin::Oracle),
        };
        Ok(self.assemble(l, rho, d, origin))
    }

    /// Dual parameters for `lmin..=lmax`.
    pub fn table(&self, lmin: u64, lmax: u64, source: DordSource) -> Result<Vec<DualCodeParams>, AgError> {
        if lmin > lmax {
            return Ok(Vec::new());
        }
        self.check_index(lmin)?;
        self.check_index(lmax)?;
        let oracle = self.semigroup.dord_range(lmin, lmax);
        (lmin..=lmax)
            .map(|l| {
                let rho = self.semigroup.rho(l)?;
                let o = oracle[(l - lmin) as usize];
                let (d, origin) = match source {
                    DordSource::ClosedWithFallback => match self.closed_form(l) {
                        Some((v, case)) => (v, DordOrigin::Closed(case)),
                        None => (o, DordOrigin::Oracle),
                    },
                    DordSource::Oracle => (o, DordOrigin::Oracle),
                };
                Ok(self.assemble(l, rho, d, origin))
            })
            .collect()
    }
}

pub fn table_csv(rows: &[DualCodeParams]) -> String {
    let mut out = String::from("l_index,rho,k_dual,d_ord,delta,Delta,Delta_float\n");
    for r in rows {
        let float = *r.relative_delta.numer() as f64 / *r.relative_delta.denom() as f64;
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6}",
            r.l_index, r.rho, r.k_dual, r.d_ord, r.delta, r.relative_delta, float
        )
        .unwrap();
    }
    out
}

/// Published `(l0, linf, delta_inf - delta_0)` triples for q = 2, n = 5.
#[rustfmt::skip]
pub const COMPARISON_Q2_N5: &[(u64, u64, i64)] = &[
    (3,4,1),(4,5,1),(5,6,1),(6,7,1),(8,9,1),(9,10,1),(10,11,1),(19,20,1),(20,21,1),(21,22,1),
    (22,23,1),(23,24,1),(24,25,1),(26,27,1),(27,28,1),(28,29,1),(29,30,1),(30,31,1),(31,32,1),
    (32,33,1),(34,35,1),(35,36,1),(36,37,1),(37,38,1),(38,39,1),(39,40,1),(40,41,1),(41,42,1),
    (42,43,1),(43,44,1),(44,45,1),(45,46,1),(46,47,1),(47,48,1),(48,49,1),(49,50,1),(50,51,1),
    (51,52,1),(52,53,1),(55,56,1),(56,56,5),(56,57,6),(57,57,6),(57,58,7),(58,58,6),(58,59,7),
    (59,59,6),(59,60,7),(60,60,6),(60,61,7),(61,61,6),(61,62,1),(62,63,1),(63,64,1),(64,65,1),
    (65,66,1),(66,66,4),(66,67,6),(67,67,7),(67,68,6),(68,68,5),(68,69,4),(69,69,5),(77,77,4),
    (77,78,4),(78,78,4),(88,88,2),(88,89,3),(89,89,4),(89,90,3),(90,90,2),(90,91,3),(91,91,4),
    (91,92,3),(92,92,2),(92,93,1),(93,93,2),(93,94,2),(94,94,1),(99,99,2),(99,100,2),(100,100,2),
    (100,101,2),(101,101,2),(101,102,2),(102,102,1),(110,110,1),(110,111,1),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub l0: u64,
    pub linf: u64,
    pub delta_0: i64,
    pub delta_inf: i64,
    pub delta_inf_minus_delta_0: i64,
}

/// `delta_inf - delta_0` for each `(l0, linf)` pair, with d_ORD by counting
/// on both semigroups.
pub fn compare(
    inf: &OnePointFamily,
    p0: &OnePointFamily,
    pairs: &[(u64, u64)],
) -> Result<Vec<ComparisonRow>, AgError> {
    pairs
        .iter()
        .map(|&(l0, linf)| {
            let d0 = p0.dual_params(l0, DordSource::Oracle)?;
            let di = inf.dual_params(linf, DordSource::Oracle)?;
            Ok(ComparisonRow {
                l0,
                linf,
                delta_0: d0.delta,
                delta_inf: di.delta,
                delta_inf_minus_delta_0: di.delta - d0.delta,
            })
        })
        .collect()
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("l0,linf,delta_inf_minus_delta_0\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.l0, r.linf, r.delta_inf_minus_delta_0).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn curve25() -> &'static (Curve, Vec<AffinePoint>) {
        static C: OnceLock<(Curve, Vec<AffinePoint>)> = OnceLock::new();
        C.get_or_init(|| {
            let c = Curve::new(2, 5).unwrap();
            let p = c.enumerate_points().unwrap();
            (c, p)
        })
    }

    #[test]
    fn basis_examples() {
        let p = CurveParams::new(2, 5).unwrap();
        assert_eq!(rr_basis_infinity(0, &p), vec![Monomial::default()]);
        let b33 = rr_basis_infinity(33, &p);
        let poles: Vec<u64> = b33.iter().map(|&m| p.pole_order_infinity(m)).collect();
        assert_eq!(poles, vec![0, 8, 16, 22, 24, 30, 32, 33]);
        assert_eq!(rr_basis_infinity(99, &p).len(), 54);
    }

    #[test]
    fn basis_pole_orders_are_the_semigroup() {
        for (q, n) in [(2, 5), (2, 7), (3, 3), (4, 3)] {
            let p = CurveParams::new(q, n).unwrap();
            let s = Semigroup::generate(&p.generator_pole_orders(), 0).unwrap();
            let top = 3 * s.conductor();
            let poles: Vec<u64> = rr_basis_infinity(top, &p)
                .iter()
                .map(|&m| p.pole_order_infinity(m))
                .collect();
            assert_eq!(poles, s.elements_upto(top), "q={q} n={n}");
        }
    }

    #[test]
    fn small_codes() {
        let (c, pts) = curve25();
        let code = build_code(c, pts, 0).unwrap();
        assert_eq!(code.rank, 1);
        assert!(code.rows[0].iter().all(|&e| e == Elem::ONE));
        let code = build_code(c, pts, 90).unwrap();
        assert_eq!(code.rank, 46);
        let code = build_code(c, pts, 91).unwrap();
        assert_eq!((code.l_requested, code.l), (91, 90));
        assert!(matches!(build_code(c, pts, 3968), Err(AgError::DegreeTooLarge { .. })));
    }

    #[test]
    fn nested_containment() {
        let (c, pts) = curve25();
        let f = c.field();
        let c0 = build_code(c, pts, 0).unwrap();
        let c33 = build_code(c, pts, 33).unwrap();
        assert!(containment(f, &c0, &c33));
        assert!(containment(f, &c33, &c33));
        assert!(!containment(f, &c33, &c0));
    }

    #[test]
    fn dual_param_examples() {
        let fam = OnePointFamily::new(2, 5, Place::Infinity).unwrap();
        let l = fam.semigroup.index_of(99).unwrap();
        let d = fam.dual_params(l, DordSource::Oracle).unwrap();
        assert_eq!((d.k_dual, d.d_ord, d.delta), (3914, 16, 39));
        assert_eq!(d.relative_delta, Rational64::new(39, 3968));
        let d1 = fam.dual_params(1, DordSource::Oracle).unwrap();
        assert_eq!(d1.k_dual, 3967);
        let l = fam.semigroup.index_of(107).unwrap();
        let d = fam.dual_params(l, DordSource::ClosedWithFallback).unwrap();
        assert_eq!(d.d_ord, 22);
        assert!(2 * d.delta < 87);
        assert_eq!(fam.dual_params(0, DordSource::Oracle), Err(AgError::IndexBeyondBound(0)));
    }

    #[test]
    fn table_matches_pointwise() {
        let fam = OnePointFamily::new(2, 5, Place::Infinity).unwrap();
        let rows = fam.table(1, 120, DordSource::Oracle).unwrap();
        for r in &rows {
            let d = fam.dual_params(r.l_index, DordSource::Oracle).unwrap();
            assert_eq!(*r, d);
            assert!(r.delta >= 0);
            assert_eq!(r.delta, r.length as i64 + 1 - r.k_dual as i64 - r.d_ord as i64);
        }
        let csv = table_csv(&rows[..2]);
        assert_eq!(csv.lines().next(), Some("l_index,rho,k_dual,d_ord,delta,Delta,Delta_float"));
        assert_eq!(csv.lines().nth(1), Some("1,0,3967,2,0,0,0.000000"));
    }

    #[test]
    fn comparison_examples() {
        let inf = OnePointFamily::new(2, 5, Place::Infinity).unwrap();
        let p0 = OnePointFamily::new(2, 5, Place::P0).unwrap();
        let rows = compare(&inf, &p0, &[(3, 4), (56, 57), (110, 111)]).unwrap();
        let got: Vec<i64> = rows.iter().map(|r| r.delta_inf_minus_delta_0).collect();
        assert_eq!(got, vec![1, 6, 1]);
    }

    #[test]
    fn falsification_small() {
        let (c, pts) = curve25();
        let code = build_code(c, pts, 0).unwrap();
        let r = weight_falsification(c.field(), &code, 200, DEFAULT_SEED);
        assert!(r.min_weight >= 2);
        let code = build_code(c, pts, 33).unwrap();
        let fam = OnePointFamily::new(2, 5, Place::Infinity).unwrap();
        let d = fam.semigroup.dord(fam.semigroup.index_of(33).unwrap());
        let r = weight_falsification(c.field(), &code, 200, 7);
        assert!(r.min_weight as u64 >= d);
        assert_eq!(r, weight_falsification(c.field(), &code, 200, 7));
    }
}
