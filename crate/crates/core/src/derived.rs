//! Parameter certificates for CSS quantum codes and unit-memory convolutional
//! codes built from the one-point codes at P_inf.

use crate::agcode::{self, AgError, DordOrigin, DordSource, OnePointFamily, Place};
use crate::curve::{AffinePoint, Curve, CurveError, CurveParams};
use crate::qtwo::{Q2, QtwoError, Triple};
use num_rational::Rational64;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivedError {
    #[error("{family}: hypothesis `{hypothesis}` fails")]
    HypothesisViolated { family: String, hypothesis: String },
    #[error("rho_(l+1) = {rho} has triple {triple}, expected (0,1,k) with m <= k < 2m")]
    TripleMismatch { rho: u64, triple: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Ag(#[from] AgError),
    #[error(transparent)]
    Qtwo(#[from] QtwoError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub statement: String,
    pub pass: bool,
}

fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantumParams {
    pub family: String,
    pub q: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub length: u64,
    pub k: u64,
    #[serde(rename = "D_lower")]
    pub d_lower: i64,
    /// `N - k - 2 D_lower + 2`
    #[serde(rename = "delta_Q")]
    pub delta_q: i64,
    #[serde(rename = "Delta_Q", serialize_with = "ser_ratio")]
    pub relative_delta_q: Rational64,
    /// Set when `delta_Q < 0`: the bound exceeds the quantum Singleton bound.
    pub bound_exceeds_singleton: bool,
    pub hypotheses: Vec<Hypothesis>,
    pub provenance: String,
    pub notes: Vec<String>,
}

impl QuantumParams {
    fn new(
        family: &str,
        c: &CurveParams,
        k: u64,
        d_lower: i64,
        hypotheses: Vec<Hypothesis>,
        provenance: &str,
    ) -> QuantumParams {
        let n = c.n_affine as i64;
        let delta_q = n - k as i64 - 2 * d_lower + 2;
        QuantumParams {
            family: family.to_string(),
            q: c.q,
            n: c.n,
            length: c.n_affine,
            k,
            d_lower,
            delta_q,
            relative_delta_q: Rational64::new(delta_q, n),
            bound_exceeds_singleton: delta_q < 0,
            hypotheses,
            provenance: provenance.to_string(),
            notes: Vec::new(),
        }
    }

    /// `[[N,k,D>=d]]` notation.
    pub fn display(&self) -> String {
        format!("[[{},{},D>={}]]", self.length, self.k, self.d_lower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvolutionalParams {
    pub q: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub length: u64,
    /// Dimension of the underlying block code.
    pub k_block: u64,
    pub k: u64,
    pub degree: u64,
    pub memory: u64,
    pub df_lower: u64,
    pub d_ord_origin: DordOrigin,
    pub hypotheses: Vec<Hypothesis>,
    pub provenance: String,
}

impl ConvolutionalParams {
    /// `(N,k,gamma;m,d_f)` notation.
    pub fn display(&self) -> String {
        format!(
            "({},{},{};{},d_f>={})",
            self.length, self.k, self.degree, self.memory, self.df_lower
        )
    }
}

fn check(family: &str, hyps: Vec<(String, bool)>) -> Result<Vec<Hypothesis>, DerivedError> {
    if let Some((h, _)) = hyps.iter().find(|(_, ok)| !ok) {
        return Err(DerivedError::HypothesisViolated {
            family: family.to_string(),
            hypothesis: h.clone(),
        });
    }
    Ok(hyps
        .into_iter()
        .map(|(statement, pass)| Hypothesis { statement, pass })
        .collect())
}

/// CSS code from the two-point pair `a < b`:
/// `[[N, b - a, D >= min{N - b, a - (2g - 2)}]]`.
pub fn css_two_point(a: u64, b: u64, q: u64, n: u64) -> Result<QuantumParams, DerivedError> {
    let family = "css_two_point";
    let c = CurveParams::new(q, n)?;
    let two_g_minus_2 = 2 * c.genus - 2;
    let big_n = c.n_affine;
    let hyps = check(
        family,
        vec![
            (format!("2g-2 = {two_g_minus_2} < a = {a}"), two_g_minus_2 < a),
            (format!("a = {a} < b = {b}"), a < b),
            (format!("b = {b} < N = {big_n}"), b < big_n),
        ],
    )?;
    let d = ((big_n - b) as i64).min(a as i64 - two_g_minus_2 as i64);
    Ok(QuantumParams::new(
        family,
        &c,
        b - a,
        d,
        hyps,
        "CSS from nested two-point codes; D >= min{N-b, a-(2g-2)}",
    ))
}

/// CSS code from `C_l ⊂ C_(l+s)`: `[[N, s, D >= l + 1 - g]]`.
pub fn css_family_t1(l: u64, s: u64, q: u64, n: u64) -> Result<QuantumParams, DerivedError> {
    let family = "css_family_t1";
    let c = CurveParams::new(q, n)?;
    let (g, big_n) = (c.genus, c.n_affine);
    let hyps = check(
        family,
        vec![
            (format!("3g-1 = {} <= l = {l}", 3 * g - 1), 3 * g - 1 <= l),
            (format!("l = {l} <= N-g = {}", big_n - g), l <= big_n - g),
            (format!("1 <= s = {s}"), s >= 1),
            (
                format!("s = {s} <= N-2l = {}", big_n as i64 - 2 * l as i64),
                (s as i64) <= big_n as i64 - 2 * l as i64,
            ),
        ],
    )?;
    let stated = l as i64 + 1 - g as i64;
    let mut p = QuantumParams::new(
        family,
        &c,
        s,
        stated,
        hyps,
        "CSS from nested one-point duals C_l ⊂ C_(l+s); D >= l+1-g",
    );
    let d1 = big_n as i64 - l as i64 - s as i64 - g as i64 + 1;
    p.notes.push(format!(
        "min{{l+1-g, N-l-s-g+1}} = {}; the reported bound is l+1-g = {stated}",
        stated.min(d1)
    ));
    Ok(p)
}

/// Every member `s = N - 2l` of [`css_family_t1`]; each has `Delta_Q = 2g/N`.
pub fn css_family_t1_max(q: u64, n: u64) -> Result<Vec<QuantumParams>, DerivedError> {
    let c = CurveParams::new(q, n)?;
    let (g, big_n) = (c.genus, c.n_affine);
    let top = (big_n - g).min((big_n - 1) / 2);
    (3 * g - 1..=top)
        .map(|l| css_family_t1(l, big_n - 2 * l, q, n))
        .collect()
}

/// Extra distance over `l + 1 - g` for `rho_(l+1) = (0,1,k)`, `m <= k < 2m`.
pub fn improved_bonus(k: u64, m: u64) -> u64 {
    let (k, m) = (k as i64, m as i64);
    if 8 * k < 9 * m - 11 {
        5
    } else if 8 * k < 11 * m - 9 {
        3
    } else {
        1
    }
}

/// CSS code from `C_l ⊂ C_(l+s)` for q = 2 when `rho_(l+1) = (0,1,k)`,
/// `k in [m, 2m)`, using the exact order bound of that case.
pub fn css_improved(l: u64, s: u64, n: u64) -> Result<QuantumParams, DerivedError> {
    let family = "css_improved";
    let q2 = Q2::new(n)?;
    let c = CurveParams::new(2, n)?;
    let (g, big_n, m) = (c.genus, c.n_affine, c.m);
    let hyps = check(
        family,
        vec![
            (format!("g = {g} <= l = {l}"), g <= l),
            (format!("l = {l} <= 3g-1 = {}", 3 * g - 1), l < 3 * g),
            (format!("1 <= s = {s}"), s >= 1),
            (
                format!("s = {s} <= N-2l-5 = {}", big_n as i64 - 2 * l as i64 - 5),
                (s as i64) <= big_n as i64 - 2 * l as i64 - 5,
            ),
        ],
    )?;
    // rho_(l+1) for l >= g lies past the conductor 2g.
    let rho_next = l + g;
    let t: Triple = q2.triple_of(rho_next)?;
    if !(t.i == 0 && t.j == 1 && m <= t.k && t.k < 2 * m) {
        return Err(DerivedError::TripleMismatch {
            rho: rho_next,
            triple: t.to_string(),
        });
    }
    let d = l as i64 + 1 - g as i64 + improved_bonus(t.k, m) as i64;
    let mut p = QuantumParams::new(
        family,
        &c,
        s,
        d,
        hyps,
        "CSS from nested one-point duals with the exact order bound for rho_(l+1) = (0,1,k)",
    );
    p.notes.push(format!("rho_(l+1) = {rho_next} = {t}"));
    Ok(p)
}

/// True iff C(D, rho1 P_inf) ⊆ C(D, rho2 P_inf), checked by row reduction;
/// equivalently the duals satisfy C_2 ⊆ C_1 as CSS needs.
pub fn verify_css_nesting(
    curve: &Curve,
    points: &[AffinePoint],
    rho1: u64,
    rho2: u64,
) -> Result<bool, DerivedError> {
    let small = agcode::build_code(curve, points, rho1)?;
    let big = agcode::build_code(curve, points, rho2)?;
    Ok(agcode::containment(curve.field(), &small, &big))
}

/// Unit-memory convolutional code from the block code C(D, rho P_inf) split
/// into `k - s` and `s` rows: `(N, k - s, s; 1, d_f >= d_ORD)`.
pub fn conv_params(
    rho: u64,
    s: u64,
    family: &OnePointFamily,
    source: DordSource,
) -> Result<ConvolutionalParams, DerivedError> {
    let name = "conv_params";
    let c = family.params;
    if family.place != Place::Infinity {
        return Err(DerivedError::HypothesisViolated {
            family: name.to_string(),
            hypothesis: "codes at P_inf".to_string(),
        });
    }
    let (g, big_n) = (c.genus, c.n_affine);
    let pre = check(
        name,
        vec![
            (format!("2g-2 = {} < rho = {rho}", 2 * g - 2), 2 * g - 2 < rho),
            (format!("rho = {rho} < N = {big_n}"), rho < big_n),
        ],
    )?;
    let k = rho + 1 - g;
    let mut hyps = pre;
    hyps.extend(check(
        name,
        vec![(format!("s = {s} <= k/2 = {}/2", k), 2 * s <= k)],
    )?);
    let l = family.semigroup.index_of(rho).map_err(AgError::from)?;
    let dual = family.dual_params(l, source)?;
    let mut df = dual.d_ord;
    if l >= 3 * g {
        hyps.push(Hypothesis {
            statement: format!("l = {l} >= 3g = {}: d_f >= l+1-g = {}", 3 * g, l + 1 - g),
            pass: true,
        });
        df = df.max(l + 1 - g);
    }
    Ok(ConvolutionalParams {
        q: c.q,
        n: c.n,
        length: big_n,
        k_block: k,
        k: k - s,
        degree: s,
        memory: 1,
        df_lower: df,
        d_ord_origin: dual.d_ord_origin,
        hypotheses: hyps,
        provenance: "unit-memory code from a one-point code split in two; d_f >= d_ORD(C_l)".to_string(),
    })
}
