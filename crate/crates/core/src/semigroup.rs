//! Numerical semigroups and the Feng-Rao order bound by direct counting.
//!
//! Indices are 1-based throughout: `rho(1) = 0 < rho(2) < ...`.

use crate::ffield::gcd;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("generators have gcd {0}, expected 1")]
    GcdNotOne(u64),
    #[error("element bound overflowed while certifying the conductor")]
    BoundTooSmall,
    #[error("indices are 1-based; index 0 is undefined")]
    IndexZero,
    #[error("{0} is a gap, not an element")]
    NotAnElement(u64),
    #[error("element list is not closed under addition ({0} + {1} missing)")]
    NotClosed(u64, u64),
    #[error("element list must contain 0")]
    MissingZero,
}

/// A numerical semigroup. Membership, `rho` and `index_of` are total: every
/// integer at or above the conductor is an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    generators: Vec<u64>,
    bound: u64,
    member: Vec<bool>,
    elements: Vec<u64>,
    genus: u64,
    conductor: u64,
}

#[derive(Serialize)]
struct SemigroupJson<'a> {
    generators: &'a [u64],
    genus: u64,
    conductor: u64,
    elements_upto: u64,
    elements: &'a [u64],
}

impl Semigroup {
    /// The semigroup generated by `generators`, listed at least up to `bound`
    /// (extended to twice the conductor when needed).
    pub fn generate(generators: &[u64], bound: u64) -> Result<Semigroup, SemigroupError> {
        let mut gens: Vec<u64> = generators.iter().copied().filter(|&a| a > 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let d = gens.iter().fold(0, |acc, &a| gcd(acc, a));
        if d != 1 {
            return Err(SemigroupError::GcdNotOne(d));
        }
        let smallest = gens[0];
        let mut b = bound.max(2 * smallest).max(16);
        loop {
            let member = sieve(&gens, b);
            // A run of `smallest` consecutive elements certifies everything after it.
            let mut run = 0u64;
            let mut conductor = None;
            for (v, &is) in member.iter().enumerate() {
                run = if is { run + 1 } else { 0 };
                if run == smallest {
                    conductor = Some(v as u64 + 1 - smallest);
                    break;
                }
            }
            if let Some(c) = conductor {
                if b >= 2 * c && b >= bound {
                    let minimal = minimal_generators(&member, c, smallest);
                    return Ok(Semigroup::from_parts(minimal, member, c));
                }
                b = b.max(2 * c).max(bound);
            } else {
                b = b.checked_mul(2).ok_or(SemigroupError::BoundTooSmall)?;
            }
            if b > (1 << 34) {
                return Err(SemigroupError::BoundTooSmall);
            }
        }
    }

    /// The semigroup whose elements below `conductor` are `small` and which
    /// contains every integer from `conductor` on.
    pub fn from_elements_below(small: &[u64], conductor: u64) -> Result<Semigroup, SemigroupError> {
        let b = (2 * conductor).max(16);
        let mut member = vec![false; b as usize + 1];
        for &v in small.iter().filter(|&&v| v < conductor) {
            member[v as usize] = true;
        }
        for v in conductor..=b {
            member[v as usize] = true;
        }
        if !member[0] {
            return Err(SemigroupError::MissingZero);
        }
        let elems: Vec<u64> = (0..conductor).filter(|&v| member[v as usize]).collect();
        for (i, &a) in elems.iter().enumerate() {
            for &c in &elems[i..] {
                if a + c < conductor && !member[(a + c) as usize] {
                    return Err(SemigroupError::NotClosed(a, c));
                }
            }
        }
        // The conductor is the true one only if conductor - 1 is a gap.
        let mut c = conductor;
        while c > 0 && member[c as usize - 1] {
            c -= 1;
        }
        let smallest = (1..=b).find(|&v| member[v as usize]).unwrap_or(1);
        let minimal = minimal_generators(&member, c, smallest);
        Ok(Semigroup::from_parts(minimal, member, c))
    }

    fn from_parts(generators: Vec<u64>, member: Vec<bool>, conductor: u64) -> Semigroup {
        let elements: Vec<u64> = member
            .iter()
            .enumerate()
            .filter(|(_, &is)| is)
            .map(|(v, _)| v as u64)
            .collect();
        let genus = (0..conductor).filter(|&v| !member[v as usize]).count() as u64;
        Semigroup {
            generators,
            bound: member.len() as u64 - 1,
            member,
            elements,
            genus,
            conductor,
        }
    }

    /// Minimal generating set, ascending.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Elements up to [`Semigroup::bound`], ascending.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn elements_upto(&self, x: u64) -> Vec<u64> {
        (0..=x).filter(|&v| self.contains(v)).collect()
    }

    pub fn gaps(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&v| !self.contains(v)).collect()
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.conductor || self.member[v as usize]
    }

    pub fn contains_signed(&self, v: i64) -> bool {
        v >= 0 && self.contains(v as u64)
    }

    /// `rho_l`, the l-th element (1-based).
    pub fn rho(&self, l: u64) -> Result<u64, SemigroupError> {
        if l == 0 {
            return Err(SemigroupError::IndexZero);
        }
        let below = self.conductor - self.genus;
        if l > below {
            Ok(l + self.genus - 1)
        } else {
            Ok(self.elements[l as usize - 1])
        }
    }

    /// The 1-based index of an element.
    pub fn index_of(&self, rho: u64) -> Result<u64, SemigroupError> {
        if !self.contains(rho) {
            return Err(SemigroupError::NotAnElement(rho));
        }
        if rho >= self.conductor {
            return Ok(rho + 1 - self.genus);
        }
        Ok(self.elements.partition_point(|&e| e < rho) as u64 + 1)
    }

    /// Number of ordered pairs of elements summing to `v`.
    pub fn pairs_summing_to(&self, v: u64) -> u64 {
        let c = self.conductor;
        if v < 2 * c {
            return (0..=v)
                .filter(|&a| self.contains(a) && self.contains(v - a))
                .count() as u64;
        }
        // a in [c, v - c] always pairs; only the two ends need checking.
        let ends = (0..c)
            .filter(|&a| self.contains(a) && self.contains(v - a))
            .count() as u64;
        2 * ends + (v - 2 * c + 1)
    }

    /// Feng-Rao `nu_l`: ordered pairs of elements summing to `rho_{l+1}`.
    pub fn nu(&self, l: u64) -> u64 {
        self.pairs_summing_to(self.rho(l + 1).expect("l + 1 >= 1"))
    }

    /// Order bound `d_ORD(l) = min { nu_m : m >= l }`, using
    /// `nu_m >= m + 1 - g` to stop the search.
    pub fn dord(&self, l: u64) -> u64 {
        let mut best = self.nu(l);
        let mut m = l + 1;
        while m + 1 < best + self.genus {
            best = best.min(self.nu(m));
            m += 1;
        }
        best
    }

    /// `d_ORD(l)` for every `l` in `lmin..=lmax`, as suffix minima of `nu`.
    pub fn dord_range(&self, lmin: u64, lmax: u64) -> Vec<u64> {
        if lmin > lmax {
            return Vec::new();
        }
        let mut out = vec![0; (lmax - lmin + 1) as usize];
        let mut cur = self.dord(lmax);
        for l in (lmin..=lmax).rev() {
            cur = cur.min(self.nu(l));
            out[(l - lmin) as usize] = cur;
        }
        out
    }

    /// `2g - 1` is a gap (vacuously true for g = 0). Debug builds also check
    /// the equivalent pairing `x in S <=> 2g - 1 - x not in S`.
    pub fn is_symmetric(&self) -> bool {
        if self.genus == 0 {
            return true;
        }
        let f = 2 * self.genus - 1;
        let by_frobenius = !self.contains(f);
        debug_assert_eq!(
            by_frobenius,
            (0..=f).all(|x| self.contains(x) != self.contains(f - x))
        );
        by_frobenius
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SemigroupJson {
            generators: &self.generators,
            genus: self.genus,
            conductor: self.conductor,
            elements_upto: self.bound,
            elements: &self.elements,
        })
        .expect("plain data")
    }
}

/// Membership table on `[0, bound]` by dynamic programming.
fn sieve(gens: &[u64], bound: u64) -> Vec<bool> {
    let mut member = vec![false; bound as usize + 1];
    member[0] = true;
    for v in 1..=bound as usize {
        member[v] = gens
            .iter()
            .any(|&a| a as usize <= v && member[v - a as usize]);
    }
    member
}

fn minimal_generators(member: &[bool], conductor: u64, smallest: u64) -> Vec<u64> {
    let top = (conductor + smallest).min(member.len() as u64 - 1);
    let elems: Vec<u64> = (1..=top).filter(|&v| member[v as usize]).collect();
    elems
        .iter()
        .copied()
        .filter(|&v| {
            !elems
                .iter()
                .take_while(|&&a| 2 * a <= v)
                .any(|&a| member[(v - a) as usize])
        })
        .collect()
}

/// Telescopic test for generators in the given order: with
/// `d_i = gcd(a_1, ..., a_i)`, each `a_i / d_i` must lie in the semigroup
/// generated by `a_1 / d_{i-1}, ..., a_{i-1} / d_{i-1}`.
pub fn is_telescopic(ordered: &[u64]) -> Result<bool, SemigroupError> {
    let total = ordered.iter().fold(0, |acc, &a| gcd(acc, a));
    if total != 1 {
        return Err(SemigroupError::GcdNotOne(total));
    }
    let mut d_prev = ordered[0];
    for i in 1..ordered.len() {
        let d_i = gcd(d_prev, ordered[i]);
        let prefix: Vec<u64> = ordered[..i].iter().map(|&a| a / d_prev).collect();
        let target = ordered[i] / d_i;
        let s = Semigroup::generate(&prefix, target)?;
        if !s.contains(target) {
            return Ok(false);
        }
        d_prev = d_i;
    }
    Ok(true)
}
