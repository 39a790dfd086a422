//! The GGS(q, n) curve
//!
//! ```text
//! x^q + x = y^(q+1),    y^(q^2) - y = z^m,    m = (q^n + 1)/(q + 1)
//! ```
//!
//! over GF(q^(2n)), with its affine rational points and the pole orders of
//! monomials at the unique place at infinity.

use crate::ffield::{prime_power, Elem, Field, FieldError};
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("n = {0} must be odd")]
    EvenN(u64),
    #[error("n = {0} must be at least 3")]
    NTooSmall(u64),
    #[error("q = {0} is not a prime power")]
    QNotPrimePower(u64),
    #[error("curve constants for q = {q}, n = {n} overflow 64 bits")]
    Overflow { q: u64, n: u64 },
    #[error("enumerated {found} affine points, expected {expected}")]
    CountMismatch { expected: u64, found: u64 },
    #[error("cannot evaluate a function at the place at infinity")]
    InfinitePoint,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Constants attached to GGS(q, n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveParams {
    pub q: u64,
    pub n: u64,
    pub p: u64,
    /// q = p^h
    pub h: u32,
    pub m: u64,
    pub genus: u64,
    pub n_affine: u64,
    pub n_total: u64,
}

impl CurveParams {
    pub fn new(q: u64, n: u64) -> Result<CurveParams, CurveError> {
        let (p, h) = prime_power(q).ok_or(CurveError::QNotPrimePower(q))?;
        if n.is_multiple_of(2) {
            return Err(CurveError::EvenN(n));
        }
        if n < 3 {
            return Err(CurveError::NTooSmall(n));
        }
        let of = CurveError::Overflow { q, n };
        let pw = |e: u64| -> Result<u64, CurveError> {
            u32::try_from(e)
                .ok()
                .and_then(|e| q.checked_pow(e))
                .ok_or(of.clone())
        };
        let qn = pw(n)?;
        let qn1 = pw(n + 1)?;
        let q2n = pw(2 * n)?;
        let q2n2 = pw(2 * n + 2)?;
        let qn2 = pw(n + 2)?;
        let qn3 = pw(n + 3)?;
        let m = (qn + 1) / (q + 1);
        debug_assert_eq!(m * (q + 1), qn + 1);
        let genus = (q - 1)
            .checked_mul(qn1 + qn - q * q)
            .ok_or(of.clone())?
            / 2;
        let n_affine = q2n2
            .checked_sub(qn3)
            .and_then(|v| v.checked_add(qn2))
            .ok_or(of.clone())?;
        let n_total = genus
            .checked_mul(2)
            .and_then(|v| v.checked_mul(qn))
            .and_then(|v| v.checked_add(q2n + 1))
            .ok_or(of)?;
        Ok(CurveParams {
            q,
            n,
            p,
            h,
            m,
            genus,
            n_affine,
            n_total,
        })
    }

    /// Degree of GF(q^(2n)) over its prime field.
    pub fn field_degree(&self) -> u32 {
        2 * self.n as u32 * self.h
    }

    /// Pole orders of x, y, z at P_inf.
    pub fn generator_pole_orders(&self) -> [u64; 3] {
        [self.m * (self.q + 1), self.m * self.q, self.q.pow(3)]
    }

    pub fn pole_order_infinity(&self, mono: Monomial) -> u64 {
        let [ox, oy, oz] = self.generator_pole_orders();
        mono.a * ox + mono.b * oy + mono.c * oz
    }

    /// `(v_P0, v_Pinf)` of `y^r z^t / x^s`.
    pub fn valuation_p0(&self, r: u64, t: u64, s: u64) -> (i64, i64) {
        let (m, q) = (self.m as i64, self.q as i64);
        let (r, t, s) = (r as i64, t as i64, s as i64);
        (
            m * r + t - m * (q + 1) * s,
            m * (q + 1) * s - m * q * r - t * q * q * q,
        )
    }
}

/// `x^a y^b z^c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Monomial {
    pub fn new(a: u64, b: u64, c: u64) -> Monomial {
        Monomial { a, b, c }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.a + other.a, self.b + other.b, self.c + other.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Affine(AffinePoint),
    Infinity,
}

/// GGS(q, n) together with its field of definition GF(q^(2n)).
#[derive(Debug)]
pub struct Curve {
    params: CurveParams,
    field: Field,
}

impl Curve {
    /// Uses the default modulus for GF(q^(2n)).
    pub fn new(q: u64, n: u64) -> Result<Curve, CurveError> {
        let params = CurveParams::new(q, n)?;
        let field = Field::new(params.p, params.field_degree(), None)?;
        Ok(Curve { params, field })
    }

    pub fn with_field(params: CurveParams, field: Field) -> Result<Curve, CurveError> {
        if field.p() != params.p || field.k() != params.field_degree() {
            return Err(CurveError::Field(FieldError::IncompatibleDegrees {
                p: params.p,
                source_k: params.field_degree(),
                target_p: field.p(),
                target_k: field.k(),
            }));
        }
        Ok(Curve { params, field })
    }

    pub fn params(&self) -> &CurveParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn satisfies_equations(&self, pt: &AffinePoint) -> bool {
        let f = &self.field;
        let q = self.params.q;
        let lhs1 = f.add(f.pow(pt.x, q), pt.x);
        let rhs1 = f.pow(pt.y, q + 1);
        let lhs2 = f.sub(f.pow(pt.y, q * q), pt.y);
        let rhs2 = f.pow(pt.z, self.params.m);
        lhs1 == rhs1 && lhs2 == rhs2
    }

    /// True iff `a` lies in the subfield GF(q^2).
    pub fn in_gf_q2(&self, a: Elem) -> bool {
        let q = self.params.q;
        self.field.pow(a, q * q) == a
    }

    /// All affine rational points, sorted by (log y, log x, log z) with zero
    /// ahead of every power of the generator.
    pub fn enumerate_points(&self) -> Result<Vec<AffinePoint>, CurveError> {
        let f = &self.field;
        let q = self.params.q;
        let size = f.size() as usize;

        // Fibers of the additive map x -> x^q + x, bucketed by image.
        let image: Vec<u32> = f.elements().map(|x| f.add(f.pow(x, q), x).0).collect();
        let mut start = vec![0usize; size + 1];
        for &c in &image {
            start[c as usize + 1] += 1;
        }
        for i in 0..size {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut fiber = vec![Elem::ZERO; size];
        for (x, &c) in image.iter().enumerate() {
            fiber[fill[c as usize]] = Elem(x as u32);
            fill[c as usize] += 1;
        }

        let mut points = Vec::with_capacity(self.params.n_affine as usize);
        for y in f.elements() {
            let c = f.pow(y, q + 1).0 as usize;
            let xs = &fiber[start[c]..start[c + 1]];
            if xs.is_empty() {
                continue;
            }
            let w = f.sub(f.pow(y, q * q), y);
            let zs = f.mth_roots(w, self.params.m)?;
            for &x in xs {
                for &z in &zs {
                    points.push(AffinePoint { x, y, z });
                }
            }
        }
        if points.len() as u64 != self.params.n_affine {
            return Err(CurveError::CountMismatch {
                expected: self.params.n_affine,
                found: points.len() as u64,
            });
        }
        points.sort_by_key(|pt| (f.log_key(pt.y), f.log_key(pt.x), f.log_key(pt.z)));
        Ok(points)
    }

    pub fn eval_monomial_affine(&self, pt: &AffinePoint, mono: Monomial) -> Elem {
        let f = &self.field;
        let v = f.mul(f.pow(pt.x, mono.a), f.pow(pt.y, mono.b));
        f.mul(v, f.pow(pt.z, mono.c))
    }

    pub fn eval_monomial(&self, pt: &CurvePoint, mono: Monomial) -> Result<Elem, CurveError> {
        match pt {
            CurvePoint::Affine(a) => Ok(self.eval_monomial_affine(a, mono)),
            CurvePoint::Infinity => Err(CurveError::InfinitePoint),
        }
    }

    /// CSV with header `x_log,y_log,z_log`; zero is written as -1.
    pub fn points_csv(&self, points: &[AffinePoint]) -> String {
        let f = &self.field;
        let mut out = String::from("x_log,y_log,z_log\n");
        for pt in points {
            writeln!(
                out,
                "{},{},{}",
                f.log_key(pt.x),
                f.log_key(pt.y),
                f.log_key(pt.z)
            )
            .unwrap();
        }
        out
    }
}
