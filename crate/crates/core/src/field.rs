//! Arithmetic in GF(p^n).
//!
//! Elements are encoded as integer codes in `[0, q)`: the base-p digits of a
//! code (least significant first) are the coefficients of the representing
//! polynomial in the generator `g`, taken modulo the field's modulus. Code 0
//! is zero, code 1 is one, and for prime fields the codes are just residues.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest field order supported.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get precomputed operation tables.
pub const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected} with coefficients below {p}")]
    BadModulus { expected: u32, p: u32 },
    #[error("modulus {0} is reducible")]
    Reducible(String),
    #[error("element code {code} out of range for GF({q})")]
    OutOfRange { code: u32, q: u32 },
    #[error("incompatible fields: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed field spec: {0}")]
    Parse(String),
}

/// Construction data of a finite field: characteristic, degree, and a monic
/// irreducible modulus over F_p (coefficients low to high).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn q(&self) -> u32 {
        self.p.pow(self.n)
    }

    /// Spec with the default modulus for GF(q): `x` for prime fields, the
    /// Conway polynomial where tabulated, and otherwise the first primitive
    /// polynomial in increasing coefficient order.
    pub fn for_order(q: u32) -> Result<FieldSpec, FieldError> {
        let (p, n) = prime_power(q)?;
        if n == 1 {
            return Ok(FieldSpec { p, n, modulus: vec![0, 1] });
        }
        let modulus = match conway(q) {
            Some(c) => c.to_vec(),
            None => first_primitive(p, n),
        };
        Ok(FieldSpec { p, n, modulus })
    }

    fn validate(&self) -> Result<(), FieldError> {
        if !is_prime(self.p) {
            return Err(FieldError::NotPrime(self.p));
        }
        if self.n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (self.p as u64).checked_pow(self.n).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q));
        }
        let bad = FieldError::BadModulus { expected: self.n, p: self.p };
        if self.modulus.len() != self.n as usize + 1
            || self.modulus[self.n as usize] != 1
            || self.modulus.iter().any(|&c| c >= self.p)
        {
            return Err(bad);
        }
        if !is_irreducible(&self.modulus, self.p) {
            return Err(FieldError::Reducible(format_poly_list(&self.modulus)));
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.n, format_poly_list(&self.modulus))
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Parses `p,n,[c0,c1,...,cn]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let open = s.find('[').ok_or_else(err)?;
        let head: Vec<&str> = s[..open].split(',').map(str::trim).collect();
        if head.len() != 3 || !head[2].is_empty() {
            return Err(err());
        }
        let p = head[0].parse().map_err(|_| err())?;
        let n = head[1].parse().map_err(|_| err())?;
        let body = s[open + 1..].strip_suffix(']').ok_or_else(err)?;
        let modulus =
            body.split(',').map(|c| c.trim().parse::<u32>().map_err(|_| err())).collect::<Result<Vec<_>, _>>()?;
        Ok(FieldSpec { p, n, modulus })
    }
}

fn format_poly_list(c: &[u32]) -> String {
    let parts: Vec<String> = c.iter().map(u32::to_string).collect();
    format!("[{}]", parts.join(","))
}

// Conway polynomials, coefficients low to high.
fn conway(q: u32) -> Option<&'static [u32]> {
    Some(match q {
        4 => &[1, 1, 1],
        8 => &[1, 1, 0, 1],
        9 => &[2, 2, 1],
        16 => &[1, 1, 0, 0, 1],
        25 => &[2, 4, 1],
        27 => &[1, 2, 0, 1],
        _ => return None,
    })
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Splits `q` as `p^n`.
pub fn prime_power(q: u32) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    if q > MAX_ORDER {
        return Err(FieldError::TooLarge(q as u64));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let (mut rest, mut n) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p, n))
}

// Dense polynomial helpers over F_p, coefficients low to high.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * factor % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = digits(low as u32, p, d);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(code % p);
        code /= p;
    }
    out
}

fn first_primitive(p: u32, n: u32) -> Vec<u32> {
    let count = p.pow(n);
    for low in 0..count {
        let mut m = digits(low, p, n as usize);
        m.push(1);
        if m[0] == 0 || !is_irreducible(&m, p) {
            continue;
        }
        let bare = FieldInner::bare(FieldSpec { p, n, modulus: m.clone() });
        if bare.order_of(p) == count - 1 {
            return m;
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

#[derive(Debug)]
struct FieldInner {
    spec: FieldSpec,
    q: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl FieldInner {
    /// Spec and negation only; arithmetic goes through the raw routines.
    fn bare(spec: FieldSpec) -> FieldInner {
        let q = spec.q();
        let mut inner = FieldInner { spec, q, add: vec![], mul: vec![], neg: vec![], inv: vec![] };
        inner.neg = (0..q).map(|a| inner.raw_neg(a) as u16).collect();
        inner
    }

    fn build(spec: FieldSpec) -> FieldInner {
        let mut inner = FieldInner::bare(spec);
        let q = inner.q;
        let n = q as usize;
        // discrete log/antilog tables from a generator of the cyclic group
        let g = (1..q).find(|&a| q == 2 || inner.order_of(a) == q - 1).expect("cyclic group has a generator");
        let mut exp = vec![0u32; n - 1];
        let mut log = vec![0usize; n];
        let mut x = 1;
        for (k, e) in exp.iter_mut().enumerate() {
            *e = x;
            log[x as usize] = k;
            x = inner.raw_mul(x, g);
        }
        let mul_logs = |a: u32, b: u32| {
            if a == 0 || b == 0 {
                0
            } else {
                exp[(log[a as usize] + log[b as usize]) % (n - 1)]
            }
        };
        if q <= TABLE_LIMIT {
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = inner.raw_add(a, b) as u16;
                    mul[a as usize * n + b as usize] = mul_logs(a, b) as u16;
                }
            }
            inner.add = add;
            inner.mul = mul;
        }
        let mut inv = vec![0u16; n];
        for a in 1..q {
            inv[a as usize] = exp[(n - 1 - log[a as usize]) % (n - 1)] as u16;
        }
        inner.inv = inv;
        inner
    }

    fn raw_add(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.spec.p;
        if self.spec.n == 1 {
            return (a + b) % p;
        }
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.spec.n {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn raw_neg(&self, mut a: u32) -> u32 {
        let p = self.spec.p;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.spec.n {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        if self.spec.n == 1 {
            return ((a as u64 * b as u64) % p as u64) as u32;
        }
        let n = self.spec.n as usize;
        let (da, db) = (digits(a, p, n), digits(b, p, n));
        let mut prod = vec![0u32; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let rem = poly_rem(&prod, &self.spec.modulus, p);
        rem.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn order_of(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.raw_mul(x, a);
            k += 1;
        }
        k
    }
}

/// A finite field GF(q). Cheap to clone; all clones share the same tables.
///
/// Arithmetic methods take and return raw element codes (`u16`) and assume
/// the codes are in range; [`FieldElement`] is the checked counterpart.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [{}]", self.0.q, self.0.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    /// Builds (or reuses) the field for `spec`. Fields are cached per spec
    /// for the life of the process, so repeated construction is cheap.
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        static CACHE: OnceLock<Mutex<HashMap<FieldSpec, Field>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().expect("field cache poisoned").get(&spec) {
            return Ok(f.clone());
        }
        spec.validate()?;
        let field = Field(Arc::new(FieldInner::build(spec.clone())));
        cache.lock().expect("field cache poisoned").entry(spec).or_insert(field.clone());
        Ok(field)
    }

    /// GF(q) with the default modulus.
    pub fn with_order(q: u32) -> Result<Field, FieldError> {
        Field::new(FieldSpec::for_order(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn n(&self) -> u32 {
        self.0.spec.n
    }

    /// All element codes in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u16> + Clone {
        (0..self.0.q).map(|c| c as u16)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u16> + Clone {
        (1..self.0.q).map(|c| c as u16)
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        let inner = &*self.0;
        if inner.add.is_empty() {
            inner.raw_add(a as u32, b as u32) as u16
        } else {
            inner.add[a as usize * inner.q as usize + b as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        let inner = &*self.0;
        if inner.mul.is_empty() {
            inner.raw_mul(a as u32, b as u32) as u16
        } else {
            inner.mul[a as usize * inner.q as usize + b as usize]
        }
    }

    pub fn inv(&self, a: u16) -> Result<u16, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.0.inv[a as usize])
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let (mut acc, mut base) = (1u16, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u16) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.0.order_of(a as u32))
    }

    pub fn element(&self, code: u32) -> Result<FieldElement, FieldError> {
        if code >= self.0.q {
            return Err(FieldError::OutOfRange { code, q: self.0.q });
        }
        Ok(FieldElement { field: self.clone(), code: code as u16 })
    }

    /// Every element of the field as a checked value, in code order.
    pub fn enumerate(&self) -> Vec<FieldElement> {
        self.elements().map(|code| FieldElement { field: self.clone(), code }).collect()
    }
}

/// An element tagged with its field, for checked arithmetic across fields.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    code: u16,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.code, self.field.q())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl FieldElement {
    pub fn code(&self) -> u16 {
        self.code
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field.spec().clone(), other.field.spec().clone()));
        }
        Ok(())
    }

    fn with(&self, code: u16) -> FieldElement {
        FieldElement { field: self.field.clone(), code }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.code, other.code)))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.with(self.field.inv(self.code)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.with(self.field.pow(self.code, e))
    }
}
