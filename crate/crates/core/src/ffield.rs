//! Arithmetic in GF(p^k) = GF(p)[T]/(f).
//!
//! An element is stored packed: the coefficient vector `(c_0, ..., c_{k-1})`
//! of its reduced representative is the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! Zero is `Elem(0)` and one is `Elem(1)`.
//!
//! Fields with at most 2^20 elements carry eager log/antilog tables; those are
//! required by [`Field::mth_roots`]. Larger fields (up to 2^24 elements) fall
//! back to polynomial multiplication.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;
/// Largest field size for which discrete-log tables are built.
pub const MAX_TABLE_SIZE: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{k}) exceeds the supported size 2^24")]
    TooLarge { p: u64, k: u32 },
    #[error("modulus has degree {got}, expected {expected}")]
    ModulusDegree { expected: u32, got: usize },
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("no default modulus shipped for GF({p}^{k})")]
    NoDefaultModulus { p: u64, k: u32 },
    #[error("no multiplicative generator found")]
    NoGeneratorFound,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("element {0} is out of range for this field")]
    ElementOutOfRange(u32),
    #[error("GF({p}^{source_k}) does not embed in GF({target_p}^{target_k})")]
    IncompatibleDegrees {
        p: u64,
        source_k: u32,
        target_p: u64,
        target_k: u32,
    },
    #[error("no generator image of the right order gives an additive map")]
    HomomorphismCheckFailed,
    #[error("field has no discrete-log table (size above 2^20)")]
    NoLogTable,
    #[error("root exponent must be positive")]
    ZeroExponent,
}

/// A packed field element. Only meaningful together with its [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: `{p, k, modulus}` with the modulus
/// coefficients little-endian by degree (constant term first, leading 1 last).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u32>,
}

/// Versioned table of default moduli. Each entry is the smallest monic
/// primitive polynomial of degree k over GF(p), ordering candidates by the
/// packed value of their lower coefficients. Version 1.
#[rustfmt::skip]
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
    (2, 13, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 14, &[1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 15, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 16, &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 17, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 18, &[1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 19, &[1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 20, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 21, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 22, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 23, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 24, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 1, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (3, 7, &[1, 2, 1, 0, 0, 0, 0, 1]),
    (3, 8, &[2, 0, 0, 1, 0, 0, 0, 0, 1]),
    (3, 9, &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1]),
    (3, 10, &[2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (3, 11, &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 12, &[2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 13, &[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 14, &[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 15, &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 1, &[2, 1]),
    (5, 2, &[2, 1, 1]),
    (5, 3, &[2, 3, 0, 1]),
    (5, 4, &[2, 2, 1, 0, 1]),
    (5, 5, &[2, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (5, 7, &[2, 3, 0, 0, 0, 0, 0, 1]),
    (5, 8, &[3, 2, 1, 0, 0, 0, 0, 0, 1]),
    (5, 9, &[3, 2, 1, 0, 0, 0, 0, 0, 0, 1]),
    (5, 10, &[3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (7, 1, &[2, 1]),
    (7, 2, &[3, 1, 1]),
    (7, 3, &[2, 3, 0, 1]),
    (7, 4, &[5, 3, 1, 0, 1]),
    (7, 5, &[4, 1, 0, 0, 0, 1]),
    (7, 6, &[5, 1, 3, 0, 0, 0, 1]),
    (7, 7, &[2, 6, 0, 0, 0, 0, 0, 1]),
    (7, 8, &[3, 1, 0, 0, 0, 0, 0, 0, 1]),
    (11, 1, &[3, 1]),
    (11, 2, &[7, 1, 1]),
    (11, 3, &[4, 1, 0, 1]),
    (11, 4, &[2, 1, 0, 0, 1]),
    (11, 5, &[4, 1, 1, 0, 0, 1]),
    (11, 6, &[8, 2, 1, 0, 0, 0, 1]),
    (13, 1, &[2, 1]),
    (13, 2, &[2, 1, 1]),
    (13, 3, &[6, 1, 0, 1]),
    (13, 4, &[2, 1, 1, 0, 1]),
    (13, 5, &[2, 4, 0, 0, 0, 1]),
    (13, 6, &[2, 2, 1, 0, 0, 0, 1]),
];

/// Shipped default modulus for GF(p^k), if any.
pub fn default_modulus(p: u64, k: u32) -> Option<&'static [u32]> {
    DEFAULT_MODULI
        .iter()
        .find(|(pp, kk, _)| u64::from(*pp) == p && *kk == k)
        .map(|(_, _, m)| *m)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` (requires gcd(a, m) = 1, m >= 1).
fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// Returns `(p, h)` with `q = p^h`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q)[0];
    let mut h = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        h += 1;
    }
    (r == 1).then_some((p, h))
}

struct LogTables {
    /// exp[i] = g^i for i in [0, 2(size-1)).
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
}

/// The finite field GF(p)[T]/(f) for a monic irreducible f of degree k.
pub struct Field {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    /// p^i for i in [0, k].
    place: Vec<u32>,
    generator: Elem,
    tables: Option<LogTables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^k). With `modulus = None` the shipped default is used.
    pub fn new(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeP(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = p
            .checked_pow(k)
            .filter(|s| *s <= MAX_FIELD_SIZE)
            .ok_or(FieldError::TooLarge { p, k })?;
        let modulus = match modulus {
            Some(m) => m.to_vec(),
            None => default_modulus(p, k)
                .ok_or(FieldError::NoDefaultModulus { p, k })?
                .to_vec(),
        };
        let p32 = p as u32;
        let mut modulus: Vec<u32> = modulus.iter().map(|c| c % p32).collect();
        while modulus.len() > 1 && *modulus.last().unwrap() == 0 {
            modulus.pop();
        }
        if modulus.len() != k as usize + 1 {
            return Err(FieldError::ModulusDegree {
                expected: k,
                got: modulus.len().saturating_sub(1),
            });
        }
        // Normalize to monic.
        let lead_inv = inv_mod(u64::from(*modulus.last().unwrap()), p) as u32;
        for c in modulus.iter_mut() {
            *c = ((u64::from(*c) * u64::from(lead_inv)) % p) as u32;
        }
        if !poly_is_irreducible(&modulus, p32) {
            return Err(FieldError::ReducibleModulus(p));
        }

        let mut place = Vec::with_capacity(k as usize + 1);
        let mut v = 1u32;
        for _ in 0..=k {
            place.push(v);
            v = v.wrapping_mul(p32);
        }
        let mut field = Field {
            p: p32,
            k,
            size: size as u32,
            modulus,
            place,
            generator: Elem::ONE,
            tables: None,
        };
        field.generator = field.find_generator()?;
        if size <= MAX_TABLE_SIZE {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        u64::from(self.p)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        u64::from(self.size)
    }

    /// Order of the multiplicative group, `size - 1`.
    pub fn group_order(&self) -> u64 {
        u64::from(self.size) - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn has_log_table(&self) -> bool {
        self.tables.is_some()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p(),
            k: self.k,
            modulus: self.modulus.clone(),
        }
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field, FieldError> {
        Field::new(d.p, d.k, Some(&d.modulus))
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.size
    }

    pub fn check(&self, a: Elem) -> Result<Elem, FieldError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(FieldError::ElementOutOfRange(a.0))
        }
    }

    /// All elements in packed order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    /// The element with the given coefficients (constant term first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Elem {
        let mut v = 0u32;
        for (i, c) in coeffs.iter().enumerate().take(self.k as usize) {
            v += (c % self.p) * self.place[i];
        }
        Elem(v)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = a.0;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// The prime-field element `c mod p`.
    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for i in 0..self.k as usize {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * self.place[i];
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        for i in 0..self.k as usize {
            let d = x % self.p;
            if d != 0 {
                out += (self.p - d) * self.place[i];
            }
            x /= self.p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let i = t.log[a.0 as usize] + t.log[b.0 as usize];
                Elem(t.exp[i as usize])
            }
            None => self.poly_mul(a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::InverseOfZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                let n = self.size - 1;
                Elem(t.exp[((n - l) % n) as usize])
            }
            None => self.pow(a, self.group_order() - 1),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.group_order();
                let l = u64::from(t.log[a.0 as usize]);
                let i = ((l as u128 * (e % n) as u128) % n as u128) as usize;
                Elem(t.exp[i])
            }
            None => {
                let mut base = a;
                let mut acc = Elem::ONE;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.poly_mul(acc, base);
                    }
                    base = self.poly_mul(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// Discrete log base the field generator; `None` for zero.
    pub fn log(&self, a: Elem) -> Result<Option<u64>, FieldError> {
        let t = self.tables.as_ref().ok_or(FieldError::NoLogTable)?;
        Ok((a.0 != 0).then(|| u64::from(t.log[a.0 as usize])))
    }

    /// Log index used for canonical orderings and exports: -1 for zero.
    pub fn log_key(&self, a: Elem) -> i64 {
        match self.log(a) {
            Ok(Some(l)) => l as i64,
            Ok(None) => -1,
            // No table: fall back to the packed value, offset so zero stays first.
            Err(_) => {
                if a.0 == 0 {
                    -1
                } else {
                    i64::from(a.0)
                }
            }
        }
    }

    /// `generator^i`.
    pub fn exp(&self, i: u64) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.exp[(i % self.group_order()) as usize]),
            None => self.pow(self.generator, i),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let mut n = self.group_order();
        for r in prime_factors(n) {
            while n.is_multiple_of(r) && self.pow(a, n / r) == Elem::ONE {
                n /= r;
            }
        }
        Some(n)
    }

    /// All z with z^m = c. Returns `{0}` for c = 0, otherwise either no roots or
    /// exactly gcd(m, size-1) of them, in increasing log order.
    pub fn mth_roots(&self, c: Elem, m: u64) -> Result<Vec<Elem>, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroExponent);
        }
        if c.0 == 0 {
            return Ok(vec![Elem::ZERO]);
        }
        let l = self.log(c)?.expect("nonzero");
        let n = self.group_order();
        let d = gcd(m, n);
        if l % d != 0 {
            return Ok(Vec::new());
        }
        let step = n / d;
        let x0 = ((l / d) as u128 * inv_mod((m / d) % step, step) as u128 % step as u128) as u64;
        Ok((0..d).map(|j| self.exp(x0 + j * step)).collect())
    }

    /// Checked handle for operator-style arithmetic.
    pub fn element(&self, a: Elem) -> Result<FieldElement<'_>, FieldError> {
        Ok(FieldElement {
            field: self,
            value: self.check(a)?,
        })
    }

    fn find_generator(&self) -> Result<Elem, FieldError> {
        let n = self.group_order();
        if n == 1 {
            return Ok(Elem::ONE);
        }
        let factors = prime_factors(n);
        (1..self.size)
            .map(Elem)
            .find(|&g| factors.iter().all(|r| self.pow_slow(g, n / r) != Elem::ONE))
            .ok_or(FieldError::NoGeneratorFound)
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.size - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.size as usize];
        let mut x = Elem::ONE;
        for i in 0..n {
            exp[i] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.poly_mul(x, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { exp, log }
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Schoolbook multiplication modulo the field polynomial.
    fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        let k = self.k as usize;
        if self.p == 2 {
            let red: u64 = self
                .modulus
                .iter()
                .enumerate()
                .fold(0, |acc, (i, c)| acc | (u64::from(*c) << i));
            let mut prod: u64 = 0;
            let (x, y) = (u64::from(a.0), u64::from(b.0));
            for i in 0..k {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            for d in (k..2 * k).rev() {
                if (prod >> d) & 1 == 1 {
                    prod ^= red << (d - k);
                }
            }
            return Elem(prod as u32);
        }
        let p = u64::from(self.p);
        let xa = self.coeffs(a);
        let xb = self.coeffs(b);
        let mut r = vec![0u64; 2 * k - 1];
        for (i, &u) in xa.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in xb.iter().enumerate() {
                r[i + j] = (r[i + j] + u64::from(u) * u64::from(v)) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = r[d];
            if c != 0 {
                for (i, &f) in self.modulus.iter().enumerate() {
                    let idx = d - k + i;
                    r[idx] = (r[idx] + (p - c) * u64::from(f)) % p;
                }
            }
        }
        let mut v = 0u32;
        for i in 0..k {
            v += r[i] as u32 * self.place[i];
        }
        Elem(v)
    }
}

/// True iff the monic polynomial `f` (constant term first) has no monic factor
/// of degree in `[1, deg f / 2]`.
fn poly_is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = lower;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let p = u64::from(p);
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    let dg = g.len() - 1;
    for d in (dg..r.len()).rev() {
        let c = r[d] % p;
        if c != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = d - dg + i;
                r[idx] = (r[idx] + (p - c) * u64::from(gc)) % p;
            }
        }
    }
    r.iter().take(dg).all(|&c| c % p == 0)
}

/// Arithmetic operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^e`; the second operand is ignored.
    Pow(u64),
    /// `a^{-1}`; the second operand is ignored.
    Inv,
    /// `-a`; the second operand is ignored.
    Neg,
}

/// An element bound to its field; mixing fields is an error.
#[derive(Clone, Copy, Debug)]
pub struct FieldElement<'f> {
    field: &'f Field,
    value: Elem,
}

impl<'f> FieldElement<'f> {
    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    fn same_field(&self, other: &FieldElement<'_>) -> Result<(), FieldError> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> FieldElement<'f> {
        FieldElement {
            field: self.field,
            value,
        }
    }

    pub fn try_add(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement<'f>, FieldError> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn neg(&self) -> FieldElement<'f> {
        self.wrap(self.field.neg(self.value))
    }

    pub fn pow(&self, e: u64) -> FieldElement<'f> {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

/// Exact field arithmetic on two bound elements.
pub fn arith<'f>(
    a: &FieldElement<'f>,
    b: &FieldElement<'_>,
    op: ArithOp,
) -> Result<FieldElement<'f>, FieldError> {
    a.same_field(b)?;
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
        ArithOp::Pow(e) => Ok(a.pow(e)),
        ArithOp::Inv => a.inv(),
        ArithOp::Neg => Ok(a.neg()),
    }
}

/// A field embedding GF(p^s) into GF(p^t), s | t, fixed by the image of the
/// source generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldDescriptor,
    target: FieldDescriptor,
    generator_image: Elem,
    /// map[a] = image of the packed source element a.
    map: Vec<Elem>,
}

impl Embedding {
    /// Maps the source generator to `G^(c (Q-1)/(q-1))` for the first `c`
    /// coprime to `q-1` whose induced map is additive, checked on all pairs.
    pub fn new(source: &Field, target: &Field) -> Result<Embedding, FieldError> {
        if source.p() != target.p() || !target.k().is_multiple_of(source.k()) {
            return Err(FieldError::IncompatibleDegrees {
                p: source.p(),
                source_k: source.k(),
                target_p: target.p(),
                target_k: target.k(),
            });
        }
        let src_order = source.group_order();
        let cofactor = target.group_order() / src_order;
        let src_log: Vec<u64> = source
            .elements()
            .skip(1)
            .map(|a| {
                source
                    .log(a)
                    .ok()
                    .flatten()
                    .unwrap_or_else(|| discrete_log_slow(source, a))
            })
            .collect();
        for c in 1..=src_order {
            if gcd(c, src_order) != 1 {
                continue;
            }
            let image = target.pow(target.generator(), c * cofactor);
            let mut map = vec![Elem::ZERO; source.size() as usize];
            for (idx, &l) in src_log.iter().enumerate() {
                map[idx + 1] = target.pow(image, l);
            }
            let additive = source.elements().all(|a| {
                source.elements().all(|b| {
                    map[source.add(a, b).0 as usize] == target.add(map[a.0 as usize], map[b.0 as usize])
                })
            });
            if additive && map[1] == Elem::ONE {
                return Ok(Embedding {
                    source: source.descriptor(),
                    target: target.descriptor(),
                    generator_image: image,
                    map,
                });
            }
        }
        Err(FieldError::HomomorphismCheckFailed)
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.map[a.0 as usize]
    }

    pub fn generator_image(&self) -> Elem {
        self.generator_image
    }

    pub fn source(&self) -> &FieldDescriptor {
        &self.source
    }

    pub fn target(&self) -> &FieldDescriptor {
        &self.target
    }

    /// Image of the whole source field, in source packed order.
    pub fn image(&self) -> &[Elem] {
        &self.map
    }
}

fn discrete_log_slow(f: &Field, a: Elem) -> u64 {
    let g = f.generator();
    let mut x = Elem::ONE;
    for i in 0..f.group_order() {
        if x == a {
            return i;
        }
        x = f.mul(x, g);
    }
    unreachable!("generator spans the multiplicative group")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_roots(f: &Field, c: Elem, m: u64) -> Vec<Elem> {
        f.elements().filter(|&z| f.pow(z, m) == c).collect()
    }

    #[test]
    fn prime_field_two() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.generator(), Elem::ONE);
    }

    #[test]
    fn gf1024_generator_order() {
        let f = Field::new(2, 10, None).unwrap();
        assert_eq!(f.size(), 1024);
        assert_eq!(f.order(f.generator()), Some(1023));
        assert_eq!(f.pow(f.generator(), 1023), Elem::ONE);
    }

    #[test]
    fn gf729_generator_order() {
        let f = Field::new(3, 6, None).unwrap();
        assert_eq!(f.size(), 729);
        assert_eq!(f.order(f.generator()), Some(728));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 2, None).unwrap_err(), FieldError::NonPrimeP(4));
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert_eq!(
            Field::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus(2)
        );
        assert!(matches!(
            Field::new(2, 3, Some(&[1, 1, 1])),
            Err(FieldError::ModulusDegree { .. })
        ));
        assert!(matches!(Field::new(2, 25, None), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn basic_identities() {
        let f = Field::new(2, 10, None).unwrap();
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(f.add(x, x), Elem::ZERO);
        let g = f.generator();
        assert_eq!(f.mul(g, f.inv(g).unwrap()), Elem::ONE);
        assert_eq!(f.inv(Elem::ZERO), Err(FieldError::InverseOfZero));
    }

    #[test]
    fn non_primitive_modulus_still_finds_generator() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        let f = Field::new(2, 4, Some(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(f.order(f.from_coeffs(&[0, 1])), Some(5));
        assert_eq!(f.order(f.generator()), Some(15));
    }

    #[test]
    fn table_and_polynomial_multiplication_agree() {
        for (p, k) in [(2, 6), (3, 4), (5, 2)] {
            let f = Field::new(p, k, None).unwrap();
            for a in f.elements() {
                for b in f.elements().step_by(7) {
                    assert_eq!(f.mul(a, b), f.poly_mul(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(2, 21, None).unwrap();
        assert!(!f.has_log_table());
        let g = f.generator();
        assert_eq!(f.mul(g, f.inv(g).unwrap()), Elem::ONE);
        assert_eq!(f.mth_roots(g, 3), Err(FieldError::NoLogTable));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, k) in [(2, 1), (2, 6), (3, 3), (5, 2), (7, 2)] {
            let f = Field::new(p, k, None).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(3) {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            }
        }
    }

    #[test]
    fn default_table_entries_are_smallest_primitive() {
        for &(p, k, m) in DEFAULT_MODULI.iter().filter(|(p, k, _)| (*p as u64).pow(*k) <= 4096) {
            let f = Field::new(p as u64, k, Some(m)).unwrap();
            let t = f.from_coeffs(&[0, 1]);
            let t = if k == 1 { f.from_int(p as i64 - m[0] as i64) } else { t };
            assert_eq!(f.order(t), Some(f.group_order()), "GF({p}^{k})");
            // No smaller candidate is primitive.
            let count = (p as u64).pow(k);
            for lower in 0..f.from_coeffs(&m[..k as usize]).0 as u64 {
                let mut cand: Vec<u32> = (0..k)
                    .map(|i| ((lower / (p as u64).pow(i)) % p as u64) as u32)
                    .collect();
                cand.push(1);
                if let Ok(g) = Field::new(p as u64, k, Some(&cand)) {
                    let t = if k == 1 {
                        g.from_int(p as i64 - cand[0] as i64)
                    } else {
                        g.from_coeffs(&[0, 1])
                    };
                    assert_ne!(g.order(t), Some(count - 1), "GF({p}^{k}) candidate {cand:?}");
                }
            }
        }
    }

    #[test]
    fn mth_roots_examples() {
        let f = Field::new(2, 10, None).unwrap();
        assert_eq!(f.mth_roots(Elem::ZERO, 11).unwrap(), vec![Elem::ZERO]);
        let mut ones = f.mth_roots(Elem::ONE, 11).unwrap();
        ones.sort();
        assert_eq!(ones.len(), 11);
        assert_eq!(ones, brute_roots(&f, Elem::ONE, 11));
        assert!(f.mth_roots(f.generator(), 11).unwrap().is_empty());
        assert!(brute_roots(&f, f.generator(), 11).is_empty());
    }

    #[test]
    fn mth_roots_match_enumeration_and_partition_field() {
        let f = Field::new(3, 4, None).unwrap();
        for m in [1u64, 2, 4, 5, 7, 16, 80, 81] {
            let mut total = 0;
            for c in f.elements() {
                let mut got = f.mth_roots(c, m).unwrap();
                got.sort();
                assert_eq!(got, brute_roots(&f, c, m), "m={m}");
                total += got.len();
            }
            assert_eq!(total as u64, f.size());
        }
        assert_eq!(f.mth_roots(Elem::ONE, 0), Err(FieldError::ZeroExponent));
    }

    #[test]
    fn frobenius_is_additive() {
        let f = Field::new(3, 6, None).unwrap();
        for a in f.elements().step_by(5) {
            for b in f.elements().step_by(11) {
                assert_eq!(f.pow(f.add(a, b), 3), f.add(f.pow(a, 3), f.pow(b, 3)));
            }
        }
    }

    #[test]
    fn embedding_gf4_into_gf1024() {
        let small = Field::new(2, 2, None).unwrap();
        let big = Field::new(2, 10, None).unwrap();
        let e = Embedding::new(&small, &big).unwrap();
        assert_eq!(e.embed(Elem::ZERO), Elem::ZERO);
        assert_eq!(e.embed(Elem::ONE), Elem::ONE);
        let g4 = e.embed(small.generator());
        assert_eq!(big.mul(big.mul(g4, g4), g4), Elem::ONE);
        assert_eq!(big.order(g4), Some(3));
        // Image is exactly the fixed field of a -> a^4.
        let mut image: Vec<Elem> = e.image().to_vec();
        image.sort();
        let fixed: Vec<Elem> = big.elements().filter(|&a| big.pow(a, 4) == a).collect();
        assert_eq!(image, fixed);
    }

    #[test]
    fn embedding_gf9_into_gf729_is_homomorphism() {
        let small = Field::new(3, 2, None).unwrap();
        let big = Field::new(3, 6, None).unwrap();
        let e = Embedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.embed(small.mul(a, b)), big.mul(e.embed(a), e.embed(b)));
                assert_eq!(e.embed(small.add(a, b)), big.add(e.embed(a), e.embed(b)));
            }
        }
        let mut image: Vec<Elem> = e.image().to_vec();
        image.sort();
        image.dedup();
        assert_eq!(image.len(), 9);
        let fixed: Vec<Elem> = big.elements().filter(|&a| big.pow(a, 9) == a).collect();
        assert_eq!(image, fixed);
    }

    #[test]
    fn embedding_rejects_incompatible_degrees() {
        let small = Field::new(2, 3, None).unwrap();
        let big = Field::new(2, 10, None).unwrap();
        assert!(matches!(
            Embedding::new(&small, &big),
            Err(FieldError::IncompatibleDegrees { .. })
        ));
    }

    #[test]
    fn bound_elements_reject_mixing() {
        let f = Field::new(2, 4, None).unwrap();
        let g = Field::new(2, 5, None).unwrap();
        let a = f.element(Elem(3)).unwrap();
        let b = g.element(Elem(3)).unwrap();
        assert_eq!(arith(&a, &b, ArithOp::Add).unwrap_err(), FieldError::FieldMismatch);
        let c = f.element(Elem(5)).unwrap();
        assert_eq!(arith(&a, &c, ArithOp::Add).unwrap().value(), Elem(6));
        let z = f.element(Elem::ZERO).unwrap();
        assert_eq!(arith(&z, &z, ArithOp::Inv).unwrap_err(), FieldError::InverseOfZero);
        assert!(f.element(Elem(16)).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let f = Field::new(3, 6, None).unwrap();
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        assert_eq!(json, r#"{"p":3,"k":6,"modulus":[2,1,0,0,0,0,1]}"#);
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(Field::from_descriptor(&back).unwrap(), f);
    }
}
