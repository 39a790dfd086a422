//! Automorphisms of GGS(q, n) fixing P_inf: translations Q and the cyclic
//! diagonal group Sigma, their action on rational points, orbits, and the
//! order of the automorphism group of the one-point codes.

use crate::agcode::EvalCode;
use crate::curve::{AffinePoint, Curve, CurveError, CurveParams};
use crate::ffield::{Elem, Embedding, Field, FieldError};
use crate::semigroup::Semigroup;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("expected {expected} translations, found {found}")]
    CountMismatch { expected: u64, found: u64 },
    #[error("zeta has order {found:?}, expected {expected}")]
    OrderCheckFailed { expected: u64, found: Option<u64> },
    #[error("generator {generator} does not permute the rational points")]
    NotAPermutation { generator: usize },
    #[error("hypothesis `{0}` fails")]
    HypothesisViolated(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An automorphism fixing P_inf, with field elements in GF(q^(2n)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveAut {
    /// `(x, y, z) -> (x + b^q y + a, y + b, z)` with `a^q + a = b^(q+1)`.
    Translation { a: Elem, b: Elem },
    /// `(x, y, z) -> (zeta^((q^n+1)e) x, zeta^(me) y, zeta^e z)`.
    Diagonal { zeta: Elem, e: u64 },
    /// Applied first to last.
    Composite(Vec<CurveAut>),
}

impl CurveAut {
    pub fn identity() -> CurveAut {
        CurveAut::Composite(Vec::new())
    }

    pub fn apply(&self, f: &Field, c: &CurveParams, pt: &AffinePoint) -> AffinePoint {
        match self {
            CurveAut::Translation { a, b } => AffinePoint {
                x: f.add(f.add(pt.x, f.mul(f.pow(*b, c.q), pt.y)), *a),
                y: f.add(pt.y, *b),
                z: pt.z,
            },
            CurveAut::Diagonal { zeta, e } => {
                let s = f.pow(*zeta, *e);
                AffinePoint {
                    x: f.mul(f.pow(s, c.q.pow(c.n as u32) + 1), pt.x),
                    y: f.mul(f.pow(s, c.m), pt.y),
                    z: f.mul(s, pt.z),
                }
            }
            CurveAut::Composite(parts) => parts.iter().fold(*pt, |p, g| g.apply(f, c, &p)),
        }
    }

    /// The 4x4 matrix acting on column vectors `(x, y, z, 1)`.
    pub fn matrix(&self, f: &Field, c: &CurveParams) -> [[Elem; 4]; 4] {
        let mut m = [[Elem::ZERO; 4]; 4];
        match self {
            CurveAut::Translation { a, b } => {
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = Elem::ONE;
                }
                m[0][1] = f.pow(*b, c.q);
                m[0][3] = *a;
                m[1][3] = *b;
            }
            CurveAut::Diagonal { zeta, e } => {
                let s = f.pow(*zeta, *e);
                m[0][0] = f.pow(s, c.q.pow(c.n as u32) + 1);
                m[1][1] = f.pow(s, c.m);
                m[2][2] = s;
                m[3][3] = Elem::ONE;
            }
            CurveAut::Composite(parts) => {
                m = CurveAut::identity_matrix();
                for g in parts {
                    m = mat_mul(f, &g.matrix(f, c), &m);
                }
            }
        }
        m
    }

    fn identity_matrix() -> [[Elem; 4]; 4] {
        let mut m = [[Elem::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Elem::ONE;
        }
        m
    }
}

fn mat_mul(f: &Field, a: &[[Elem; 4]; 4], b: &[[Elem; 4]; 4]) -> [[Elem; 4]; 4] {
    let mut out = [[Elem::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).fold(Elem::ZERO, |s, k| f.add(s, f.mul(a[i][k], b[k][j])));
        }
    }
    out
}

/// All `q^3` translations, with `a, b` taken from the subfield GF(q^2).
pub fn q_group(curve: &Curve) -> Result<Vec<CurveAut>, AutError> {
    let c = curve.params();
    let f = curve.field();
    let small = Field::new(c.p, 2 * c.h, None)?;
    let emb = Embedding::new(&small, f)?;
    let mut out = Vec::new();
    for b in small.elements() {
        let rhs = small.pow(b, c.q + 1);
        for a in small.elements() {
            if small.add(small.pow(a, c.q), a) == rhs {
                out.push(CurveAut::Translation {
                    a: emb.embed(a),
                    b: emb.embed(b),
                });
            }
        }
    }
    let expected = c.q.pow(3);
    if out.len() as u64 != expected {
        return Err(AutError::CountMismatch {
            expected,
            found: out.len() as u64,
        });
    }
    Ok(out)
}

pub fn sigma_order(c: &CurveParams) -> u64 {
    (c.q.pow(c.n as u32) + 1) * (c.q - 1)
}

/// The generator of Sigma: `zeta = G^((Q-1)/((q^n+1)(q-1)))` for the field
/// generator G.
pub fn sigma_generator(curve: &Curve) -> Result<CurveAut, AutError> {
    let f = curve.field();
    let order = sigma_order(curve.params());
    let found = if f.group_order().is_multiple_of(order) {
        let zeta = f.pow(f.generator(), f.group_order() / order);
        let o = f.order(zeta);
        if o == Some(order) {
            return Ok(CurveAut::Diagonal { zeta, e: 1 });
        }
        o
    } else {
        None
    };
    Err(AutError::OrderCheckFailed {
        expected: order,
        found,
    })
}

/// `q^3 (q - 1)(q^n + 1)`.
pub fn aut_group_order(c: &CurveParams) -> u64 {
    c.q.pow(3) * sigma_order(c)
}

/// Point indices: `0..N` are the affine points in the given order, `N` is P_inf.
pub struct PointIndex {
    index: HashMap<AffinePoint, usize>,
    len: usize,
}

impl PointIndex {
    pub fn new(points: &[AffinePoint]) -> PointIndex {
        PointIndex {
            index: points.iter().enumerate().map(|(i, &p)| (p, i)).collect(),
            len: points.len(),
        }
    }

    pub fn get(&self, pt: &AffinePoint) -> Option<usize> {
        self.index.get(pt).copied()
    }

    pub fn infinity(&self) -> usize {
        self.len
    }
}

/// The permutation of `points` (affine part, P_inf fixed) induced by `g`.
pub fn affine_permutation(
    curve: &Curve,
    points: &[AffinePoint],
    index: &PointIndex,
    g: &CurveAut,
) -> Option<Vec<usize>> {
    let mut seen = vec![false; points.len()];
    let mut perm = Vec::with_capacity(points.len());
    for pt in points {
        let j = index.get(&g.apply(curve.field(), curve.params(), pt))?;
        if std::mem::replace(&mut seen[j], true) {
            return None;
        }
        perm.push(j);
    }
    Some(perm)
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortOrbit {
    pub size: u64,
    /// `"P_inf"` or `"(x_log,y_log,z_log)"` with -1 for zero.
    pub representative: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub group_order: u64,
    /// Ascending.
    pub orbit_sizes: Vec<u64>,
    pub short_orbits: Vec<ShortOrbit>,
}

impl OrbitReport {
    /// `{1, 8, 264x15}` style summary.
    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.orbit_sizes.len() {
            let s = self.orbit_sizes[i];
            let run = self.orbit_sizes[i..].iter().take_while(|&&t| t == s).count();
            parts.push(if run == 1 { s.to_string() } else { format!("{s}x{run}") });
            i += run;
        }
        format!("{{{}}}", parts.join(", "))
    }
}

/// Orbits of the group generated by `generators` on the affine points plus
/// P_inf, by union-find over generator images.
pub fn orbits(curve: &Curve, points: &[AffinePoint], generators: &[CurveAut]) -> Result<OrbitReport, AutError> {
    let index = PointIndex::new(points);
    let mut uf = UnionFind::new(points.len() + 1);
    for (gi, g) in generators.iter().enumerate() {
        let perm = affine_permutation(curve, points, &index, g).ok_or(AutError::NotAPermutation { generator: gi })?;
        for (i, &j) in perm.iter().enumerate() {
            uf.union(i, j);
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    for i in 0..=points.len() {
        if uf.find(i) == i {
            reps.push(i);
            sizes.push(uf.size[i] as u64);
        }
    }
    let group_order = aut_group_order(curve.params());
    let f = curve.field();
    let mut short_orbits: Vec<ShortOrbit> = reps
        .iter()
        .zip(&sizes)
        .filter(|(_, &s)| s < group_order)
        .map(|(&r, &s)| ShortOrbit {
            size: s,
            representative: if r == points.len() {
                "P_inf".to_string()
            } else {
                let p = points[r];
                format!("({},{},{})", f.log_key(p.x), f.log_key(p.y), f.log_key(p.z))
            },
        })
        .collect();
    short_orbits.sort_by_key(|o| o.size);
    sizes.sort_unstable();
    Ok(OrbitReport {
        group_order,
        orbit_sizes: sizes,
        short_orbits,
    })
}

/// The order of the permutation group generated by `generators` on the affine
/// points, by closure. Stops once more than `cap` elements are found.
pub fn generated_group_order(
    curve: &Curve,
    points: &[AffinePoint],
    generators: &[CurveAut],
    cap: usize,
) -> Result<u64, AutError> {
    let index = PointIndex::new(points);
    let gens: Vec<Vec<usize>> = generators
        .iter()
        .enumerate()
        .map(|(gi, g)| affine_permutation(curve, points, &index, g).ok_or(AutError::NotAPermutation { generator: gi }))
        .collect::<Result<_, _>>()?;
    let id: Vec<usize> = (0..points.len()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let next: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Ok(seen.len() as u64);
                }
                frontier.push(next);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// True iff permuting coordinates by `g` maps every generator row of `code`
/// back into the code.
pub fn permutation_preserves_code(curve: &Curve, points: &[AffinePoint], g: &CurveAut, code: &EvalCode) -> bool {
    let index = PointIndex::new(points);
    let Some(perm) = affine_permutation(curve, points, &index, g) else {
        return false;
    };
    let e = code.echelon(curve.field());
    code.rows.iter().all(|row| {
        let permuted: Vec<Elem> = perm.iter().map(|&j| row[j]).collect();
        e.contains(&permuted)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub statement: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeAutReport {
    pub l: u64,
    pub curve_aut_order: u64,
    pub field_aut_order: u64,
    pub scalar_order: u64,
    pub order: u128,
    pub hypotheses: Vec<HypothesisCheck>,
}

/// `|Aut(C(D, l P_inf))| = q^3 (q-1)(q^n+1) * 2nh * (q^(2n) - 1)` when
/// `q^n + 1 <= l <= q^(n+2) - q^3` and `l, l - 1` are in H(P_inf).
pub fn code_aut_order(l: u64, q: u64, n: u64) -> Result<CodeAutReport, AutError> {
    let c = CurveParams::new(q, n)?;
    let qn = q.pow(n as u32);
    let upper = q.pow(n as u32 + 2) - q.pow(3);
    let [gx, gy, gz] = c.generator_pole_orders();
    let h = Semigroup::generate(&[gz, gy, gx], l + 1).map_err(|e| AutError::HypothesisViolated(e.to_string()))?;
    let hyps = vec![
        (format!("q^n+1 = {} <= l = {l}", qn + 1), qn < l),
        (format!("l = {l} <= q^(n+2)-q^3 = {upper}"), l <= upper),
        (format!("l = {l} in H(P_inf)"), h.contains(l)),
        (format!("l-1 = {} in H(P_inf)", l.saturating_sub(1)), l >= 1 && h.contains(l - 1)),
    ];
    if let Some((s, _)) = hyps.iter().find(|(_, ok)| !ok) {
        return Err(AutError::HypothesisViolated(s.clone()));
    }
    let curve_aut_order = aut_group_order(&c);
    let field_aut_order = c.field_degree() as u64;
    let scalar_order = q.pow(2 * n as u32) - 1;
    Ok(CodeAutReport {
        l,
        curve_aut_order,
        field_aut_order,
        scalar_order,
        order: curve_aut_order as u128 * field_aut_order as u128 * scalar_order as u128,
        hypotheses: hyps
            .into_iter()
            .map(|(statement, pass)| HypothesisCheck { statement, pass })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agcode::build_code;

    fn setup() -> (Curve, Vec<AffinePoint>) {
        let curve = Curve::new(2, 5).unwrap();
        let pts = curve.enumerate_points().unwrap();
        (curve, pts)
    }

    #[test]
    fn translations_q2() {
        let (curve, _) = setup();
        let qg = q_group(&curve).unwrap();
        assert_eq!(qg.len(), 8);
        assert!(qg.contains(&CurveAut::Translation { a: Elem::ZERO, b: Elem::ZERO }));
        let f = curve.field();
        let c = curve.params();
        // Q_(a1,b1) after Q_(a2,b2) is Q_(a1+a2+b1^q b2, b1+b2).
        for g1 in &qg {
            for g2 in &qg {
                let (CurveAut::Translation { a: a1, b: b1 }, CurveAut::Translation { a: a2, b: b2 }) = (g1, g2) else {
                    unreachable!()
                };
                let t = CurveAut::Translation {
                    a: f.add(f.add(*a1, *a2), f.mul(f.pow(*b1, c.q), *b2)),
                    b: f.add(*b1, *b2),
                };
                assert!(qg.contains(&t));
            }
        }
    }

    #[test]
    fn sigma_q2_n5() {
        let (curve, pts) = setup();
        let s = sigma_generator(&curve).unwrap();
        assert_eq!(sigma_order(curve.params()), 33);
        let CurveAut::Diagonal { zeta, .. } = s else { unreachable!() };
        let f = curve.field();
        assert_eq!(f.pow(zeta, 33), Elem::ONE);
        let s33 = CurveAut::Diagonal { zeta, e: 33 };
        for p in pts.iter().take(50) {
            assert_eq!(s33.apply(f, curve.params(), p), *p);
        }
        let idx = PointIndex::new(&pts);
        assert!(affine_permutation(&curve, &pts, &idx, &s).is_some());
    }

    #[test]
    fn matrix_action_matches() {
        let (curve, pts) = setup();
        let f = curve.field();
        let c = curve.params();
        let mut gens = q_group(&curve).unwrap();
        gens.push(sigma_generator(&curve).unwrap());
        gens.push(CurveAut::Composite(vec![gens[3].clone(), gens[8].clone(), gens[5].clone()]));
        for g in &gens {
            let m = g.matrix(f, c);
            for p in pts.iter().step_by(97) {
                let v = [p.x, p.y, p.z, Elem::ONE];
                let w: Vec<Elem> = (0..4)
                    .map(|i| (0..4).fold(Elem::ZERO, |s, k| f.add(s, f.mul(m[i][k], v[k]))))
                    .collect();
                let img = g.apply(f, c, p);
                assert_eq!(w, vec![img.x, img.y, img.z, Elem::ONE]);
            }
        }
    }

    #[test]
    fn orbits_q2_n5() {
        let (curve, pts) = setup();
        let mut gens = q_group(&curve).unwrap();
        gens.push(sigma_generator(&curve).unwrap());
        let r = orbits(&curve, &pts, &gens).unwrap();
        assert_eq!(r.group_order, 264);
        let mut expected = vec![1u64, 8];
        expected.extend([264; 15]);
        assert_eq!(r.orbit_sizes, expected);
        assert_eq!(r.summary(), "{1, 8, 264x15}");
        assert_eq!(r.short_orbits[0].representative, "P_inf");
        assert!(r.short_orbits[1].representative.ends_with(",-1)"));
        assert_eq!(generated_group_order(&curve, &pts, &gens, 10_000).unwrap(), 264);
    }

    #[test]
    fn code_preserved_by_generators() {
        let (curve, pts) = setup();
        let code = build_code(&curve, &pts, 99).unwrap();
        let mut gens = q_group(&curve).unwrap();
        gens.push(sigma_generator(&curve).unwrap());
        gens.push(CurveAut::identity());
        for g in &gens {
            assert!(permutation_preserves_code(&curve, &pts, g, &code));
        }
    }

    #[test]
    fn code_aut_orders() {
        let r = code_aut_order(41, 2, 5).unwrap();
        assert_eq!(r.order, 2_700_720);
        assert!(r.hypotheses.iter().all(|h| h.pass));
        assert!(matches!(code_aut_order(32, 2, 5), Err(AutError::HypothesisViolated(_))));
        // 40 is an element but 39 is not
        assert!(code_aut_order(40, 2, 5).is_err());
        assert!(code_aut_order(121, 2, 5).is_err());
    }
}
