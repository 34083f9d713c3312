//! Reduced polynomials in F_q[x1..xm]/(x_i^q - x_i) and their evaluation
//! tables.
//!
//! Every exponent of a [`ReducedPoly`] lies in `[0, q-1]`, which makes the
//! map to functions F_q^m → F_q a bijection. Conversions in both directions
//! go through a dense coefficient tensor indexed exactly like the points:
//! the monomial with exponents `(e1..em)` sits at `Σ e_i·q^(m-i)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::Field;
use crate::geometry::{AffineMap, GeometryError, Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live in different rings: {0}")]
    Mismatch(String),
    #[error("expected {expected} values, got {got}")]
    TableLength { expected: usize, got: usize },
    #[error("value {0} is not an element code")]
    BadCode(u32),
    #[error("polynomial does not vanish on hyperplane x{axis} = {value}: nonzero at {witness:?}")]
    DoesNotVanish { axis: usize, value: u16, witness: Vec<u16> },
    #[error("polynomial is nonzero off hyperplane x{axis} = {value}: nonzero at {witness:?}")]
    NonzeroOffHyperplane { axis: usize, value: u16, witness: Vec<u16> },
    #[error("axis {axis} out of range for {m} variables")]
    Axis { axis: usize, m: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Total degree of a reduced polynomial; the zero polynomial has degree
/// `Bottom`, which compares below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Bottom,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Bottom => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// `self <= r` for a finite bound; `Bottom` satisfies every bound.
    pub fn at_most(self, r: u32) -> bool {
        self <= Degree::Finite(r)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Bottom => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Exponent vector of a reduced monomial.
///
/// Ordered by total degree, then so that `x1` precedes `x2` within a degree
/// (reverse lexicographic on the exponent vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exponents: Vec<u16>) -> Monomial {
        Monomial(exponents)
    }

    pub fn one(m: usize) -> Monomial {
        Monomial(vec![0; m])
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `e ↦ ((e-1) mod (q-1)) + 1` for `e > q-1`; the rule `x^q = x` on exponents.
pub fn reduce_exponent(e: u32, q: u32) -> u16 {
    if e < q {
        e as u16
    } else {
        ((e - 1) % (q - 1) + 1) as u16
    }
}

/// All reduced monomials in `m` variables of total degree at most `r`, in
/// monomial order.
pub fn monomials_up_to(q: u32, m: usize, r: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; m];
    fn rec(q: u32, r: u32, pos: usize, used: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if pos == exps.len() {
            out.push(Monomial(exps.clone()));
            return;
        }
        for e in 0..q.min(r - used + 1) {
            exps[pos] = e as u16;
            rec(q, r, pos + 1, used + e, exps, out);
        }
        exps[pos] = 0;
    }
    rec(q, r, 0, 0, &mut exps, &mut out);
    out.sort();
    out
}

/// Values of a function F_q^m → F_q, in canonical point order.
#[derive(Clone, PartialEq, Eq)]
pub struct EvaluationTable {
    space: Space,
    values: Vec<u16>,
}

impl fmt::Debug for EvaluationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EvaluationTable({self})")
    }
}

impl fmt::Display for EvaluationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(u16::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl EvaluationTable {
    pub fn new(space: &Space, values: Vec<u16>) -> Result<EvaluationTable, PolyError> {
        if values.len() != space.size() {
            return Err(PolyError::TableLength { expected: space.size(), got: values.len() });
        }
        if let Some(&v) = values.iter().find(|&&v| v as u32 >= space.q()) {
            return Err(PolyError::BadCode(v as u32));
        }
        Ok(EvaluationTable { space: space.clone(), values })
    }

    pub(crate) fn from_raw(space: &Space, values: Vec<u16>) -> EvaluationTable {
        debug_assert_eq!(values.len(), space.size());
        EvaluationTable { space: space.clone(), values }
    }

    pub fn zero(space: &Space) -> EvaluationTable {
        EvaluationTable { space: space.clone(), values: vec![0; space.size()] }
    }

    /// Parses comma-separated element codes.
    pub fn parse(space: &Space, text: &str) -> Result<EvaluationTable, PolyError> {
        let values = text
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<u16>().map_err(|_| PolyError::Parse(format!("bad table entry `{v}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        EvaluationTable::new(space, values)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u16> {
        self.values
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    /// Sorted indices of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i).collect()
    }

    fn check_same(&self, other: &EvaluationTable) -> Result<(), PolyError> {
        if self.space != other.space {
            return Err(PolyError::Mismatch(format!(
                "tables over F_{}^{} and F_{}^{}",
                self.space.q(),
                self.space.m(),
                other.space.q(),
                other.space.m()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &EvaluationTable) -> Result<EvaluationTable, PolyError> {
        self.check_same(other)?;
        let f = self.space.field();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(EvaluationTable::from_raw(&self.space, values))
    }

    pub fn sub(&self, other: &EvaluationTable) -> Result<EvaluationTable, PolyError> {
        self.check_same(other)?;
        let f = self.space.field();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(EvaluationTable::from_raw(&self.space, values))
    }

    pub fn mul(&self, other: &EvaluationTable) -> Result<EvaluationTable, PolyError> {
        self.check_same(other)?;
        let f = self.space.field();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.mul(a, b)).collect();
        Ok(EvaluationTable::from_raw(&self.space, values))
    }

    pub fn scale(&self, c: u16) -> EvaluationTable {
        let f = self.space.field();
        EvaluationTable::from_raw(&self.space, self.values.iter().map(|&a| f.mul(c, a)).collect())
    }

    /// Hamming distance.
    pub fn distance(&self, other: &EvaluationTable) -> Result<usize, PolyError> {
        Ok(self.sub(other)?.weight())
    }

    /// Table of `x ↦ self(tau(x))`.
    pub fn compose(&self, tau: &AffineMap) -> EvaluationTable {
        let perm = tau.permutation(&self.space);
        self.permuted(&perm)
    }

    /// Table of `i ↦ self[perm[i]]`.
    pub fn permuted(&self, perm: &[u32]) -> EvaluationTable {
        let values = perm.iter().map(|&j| self.values[j as usize]).collect();
        EvaluationTable::from_raw(&self.space, values)
    }
}

/// Applies the q×q matrix `mat[out][in]` along every axis of a q^m tensor.
fn transform_axes(field: &Field, m: usize, data: &mut [u16], mat: &[Vec<u16>]) {
    let q = field.q() as usize;
    let mut buf = vec![0u16; q];
    for axis in 0..m {
        let stride = q.pow((m - 1 - axis) as u32);
        let block = stride * q;
        for start in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = start + inner;
                for (k, row) in mat.iter().enumerate() {
                    let mut acc = 0u16;
                    for (a, &coef) in row.iter().enumerate() {
                        if coef != 0 {
                            acc = field.add(acc, field.mul(coef, data[base + a * stride]));
                        }
                    }
                    buf[k] = acc;
                }
                for (k, &v) in buf.iter().enumerate() {
                    data[base + k * stride] = v;
                }
            }
        }
    }
}

/// `powers[a][k] = a^k`, with `0^0 = 1`.
fn power_matrix(field: &Field) -> Vec<Vec<u16>> {
    field.elements().map(|a| (0..field.q()).map(|k| field.pow(a, k as u64)).collect()).collect()
}

/// `mat[k][a]` is the coefficient of `x^k` in the univariate delta
/// `1 - (x-a)^(q-1)`, using `(x-a)^(q-1) = Σ_k a^(q-1-k) x^k`.
fn delta_matrix(field: &Field) -> Vec<Vec<u16>> {
    let q = field.q() as usize;
    let pw = power_matrix(field);
    let mut mat = vec![vec![0u16; q]; q];
    for a in 0..q {
        for (k, row) in mat.iter_mut().enumerate() {
            let term = pw[a][q - 1 - k];
            row[a] = if k == 0 { field.sub(1, term) } else { field.neg(term) };
        }
    }
    mat
}

/// Coefficients of `1 - (x-b)^(q-1)` by power of x.
fn delta_coefficients(field: &Field, b: u16) -> Vec<u16> {
    let q = field.q() as usize;
    (0..q)
        .map(|k| {
            let term = field.pow(b, (q - 1 - k) as u64);
            if k == 0 {
                field.sub(1, term)
            } else {
                field.neg(term)
            }
        })
        .collect()
}

/// An element of B_m^q: a map from reduced monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ReducedPoly {
    space: Space,
    terms: BTreeMap<Monomial, u16>,
}

impl fmt::Debug for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedPoly[F_{}^{}]({self})", self.space.q(), self.space.m())
    }
}

impl ReducedPoly {
    pub fn zero(space: &Space) -> ReducedPoly {
        ReducedPoly { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(space: &Space, c: u16) -> ReducedPoly {
        ReducedPoly::from_terms(space, [(vec![0; space.m()], c)]).expect("constant term is well formed")
    }

    /// `x_axis` (axes are 0-based).
    pub fn variable(space: &Space, axis: usize) -> Result<ReducedPoly, PolyError> {
        check_axis(space, axis)?;
        let mut e = vec![0u16; space.m()];
        e[axis] = 1;
        ReducedPoly::from_terms(space, [(e, 1)])
    }

    /// `x_axis - a`.
    pub fn linear(space: &Space, axis: usize, a: u16) -> Result<ReducedPoly, PolyError> {
        let x = ReducedPoly::variable(space, axis)?;
        x.sub(&ReducedPoly::constant(space, a))
    }

    /// `1 - (x_axis - b)^(q-1)`, the indicator of the hyperplane `x_axis = b`.
    pub fn hyperplane_indicator(space: &Space, axis: usize, b: u16) -> Result<ReducedPoly, PolyError> {
        check_axis(space, axis)?;
        let coeffs = delta_coefficients(space.field(), b);
        let terms = coeffs.into_iter().enumerate().map(|(k, c)| {
            let mut e = vec![0u16; space.m()];
            e[axis] = k as u16;
            (e, c)
        });
        ReducedPoly::from_terms(space, terms)
    }

    /// Collects terms, reducing exponents with `x^q = x` and merging like
    /// monomials.
    pub fn from_terms<I>(space: &Space, terms: I) -> Result<ReducedPoly, PolyError>
    where
        I: IntoIterator<Item = (Vec<u16>, u16)>,
    {
        let f = space.field();
        let q = space.q();
        let mut map: BTreeMap<Monomial, u16> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != space.m() {
                return Err(GeometryError::DimensionMismatch { expected: space.m(), got: exps.len() }.into());
            }
            if c as u32 >= q {
                return Err(PolyError::BadCode(c as u32));
            }
            let reduced = exps.iter().map(|&e| reduce_exponent(e as u32, q)).collect();
            let slot = map.entry(Monomial(reduced)).or_insert(0);
            *slot = f.add(*slot, c);
        }
        map.retain(|_, c| *c != 0);
        Ok(ReducedPoly { space: space.clone(), terms: map })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u16)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coefficient(&self, exponents: &[u16]) -> u16 {
        self.terms.get(&Monomial(exponents.to_vec())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn check_same(&self, other: &ReducedPoly) -> Result<(), PolyError> {
        if self.space != other.space {
            return Err(PolyError::Mismatch(format!(
                "B over F_{} in {} variables vs F_{} in {}",
                self.space.q(),
                self.m(),
                other.space.q(),
                other.m()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ReducedPoly) -> Result<ReducedPoly, PolyError> {
        self.check_same(other)?;
        let terms = self.terms().chain(other.terms()).map(|(k, c)| (k.0.clone(), c));
        ReducedPoly::from_terms(&self.space, terms.collect::<Vec<_>>())
    }

    pub fn neg(&self) -> ReducedPoly {
        self.scale(self.field().neg(1))
    }

    pub fn sub(&self, other: &ReducedPoly) -> Result<ReducedPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u16) -> ReducedPoly {
        let f = self.field();
        let terms: BTreeMap<Monomial, u16> =
            self.terms.iter().map(|(k, &v)| (k.clone(), f.mul(c, v))).filter(|(_, v)| *v != 0).collect();
        ReducedPoly { space: self.space.clone(), terms }
    }

    /// Product in B_m^q.
    pub fn mul(&self, other: &ReducedPoly) -> Result<ReducedPoly, PolyError> {
        self.check_same(other)?;
        let f = self.field();
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let e = a.0.iter().zip(&b.0).map(|(&x, &y)| x + y).collect();
                out.push((e, f.mul(ca, cb)));
            }
        }
        ReducedPoly::from_terms(&self.space, out)
    }

    pub fn eval(&self, x: &[u16]) -> Result<u16, PolyError> {
        self.space.check_point(x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[u16]) -> u16 {
        let f = self.field();
        self.terms.iter().fold(0, |acc, (mono, &c)| {
            let v = mono.0.iter().zip(x).fold(c, |v, (&e, &xi)| f.mul(v, f.pow(xi, e as u64)));
            f.add(acc, v)
        })
    }

    pub fn degree(&self) -> Degree {
        self.terms.keys().map(Monomial::degree).max().map_or(Degree::Bottom, Degree::Finite)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, axis: usize) -> Degree {
        self.terms.keys().map(|k| k.0[axis] as u32).max().map_or(Degree::Bottom, Degree::Finite)
    }

    fn dense(&self) -> Vec<u16> {
        let mut data = vec![0u16; self.space.size()];
        for (mono, &c) in &self.terms {
            data[self.space.index(&mono.0)] = c;
        }
        data
    }

    fn from_dense(space: &Space, data: &[u16]) -> ReducedPoly {
        let terms =
            data.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (Monomial(space.coords(i)), c)).collect();
        ReducedPoly { space: space.clone(), terms }
    }

    /// Evaluation table in canonical point order.
    pub fn to_table(&self) -> EvaluationTable {
        let mut data = self.dense();
        transform_axes(self.field(), self.m(), &mut data, &power_matrix(self.field()));
        EvaluationTable::from_raw(&self.space, data)
    }

    /// The unique reduced polynomial with the given table, via the expansion
    /// `f = Σ_a f(a) Π_i (1 - (x_i - a_i)^(q-1))`.
    pub fn interpolate(table: &EvaluationTable) -> ReducedPoly {
        let space = table.space();
        let mut data = table.values().to_vec();
        transform_axes(space.field(), space.m(), &mut data, &delta_matrix(space.field()));
        ReducedPoly::from_dense(space, &data)
    }

    /// Given that `self` vanishes on `x_axis = a`, returns `Q` with
    /// `self = (x_axis - a)·Q`. Synthetic division in `x_axis`.
    pub fn divide_linear(&self, axis: usize, a: u16) -> Result<ReducedPoly, PolyError> {
        check_axis(&self.space, axis)?;
        check_code(&self.space, a)?;
        let table = self.to_table();
        if let Some(i) = (0..self.space.size()).find(|&i| table.values[i] != 0 && self.space.coords(i)[axis] == a) {
            return Err(PolyError::DoesNotVanish { axis: axis + 1, value: a, witness: self.space.coords(i) });
        }
        let f = self.field();
        let q = self.space.q() as usize;
        // group coefficients by the monomial in the remaining variables
        let mut columns: BTreeMap<Vec<u16>, Vec<u16>> = BTreeMap::new();
        for (mono, c) in self.terms() {
            let mut rest = mono.0.clone();
            let k = rest[axis] as usize;
            rest[axis] = 0;
            columns.entry(rest).or_insert_with(|| vec![0; q])[k] = c;
        }
        let mut out = Vec::new();
        for (rest, coeffs) in columns {
            // coeffs[k] of x^k; quotient b_{k-1} = c_k + a·b_k from the top
            let mut carry = 0u16;
            for k in (1..q).rev() {
                carry = f.add(coeffs[k], f.mul(a, carry));
                if carry != 0 {
                    let mut e = rest.clone();
                    e[axis] = (k - 1) as u16;
                    out.push((e, carry));
                }
            }
            debug_assert_eq!(f.add(coeffs[0], f.mul(a, carry)), 0, "nonzero remainder");
        }
        ReducedPoly::from_terms(&self.space, out)
    }

    /// Given that `self` vanishes off `x_axis = b`, returns `Q` in the other
    /// `m-1` variables with `self = (1 - (x_axis - b)^(q-1))·Q`; `Q` is
    /// `self` with `x_axis = b` substituted.
    pub fn complement_factor(&self, axis: usize, b: u16) -> Result<ReducedPoly, PolyError> {
        check_axis(&self.space, axis)?;
        check_code(&self.space, b)?;
        let table = self.to_table();
        if let Some(i) = (0..self.space.size()).find(|&i| table.values[i] != 0 && self.space.coords(i)[axis] != b) {
            return Err(PolyError::NonzeroOffHyperplane { axis: axis + 1, value: b, witness: self.space.coords(i) });
        }
        let f = self.field();
        let sub = Space::new(f.clone(), self.m() - 1)?;
        let terms = self
            .terms()
            .map(|(mono, c)| {
                let mut e = mono.0.clone();
                let k = e.remove(axis);
                (e, f.mul(c, f.pow(b, k as u64)))
            })
            .collect::<Vec<_>>();
        ReducedPoly::from_terms(&sub, terms)
    }

    /// The same polynomial with a new variable (not occurring) inserted at
    /// position `axis`, in `m+1` variables.
    pub fn insert_variable(&self, axis: usize) -> Result<ReducedPoly, PolyError> {
        if axis > self.m() {
            return Err(PolyError::Axis { axis, m: self.m() + 1 });
        }
        let sup = Space::new(self.field().clone(), self.m() + 1)?;
        let terms = self.terms().map(|(mono, c)| {
            let mut e = mono.0.clone();
            e.insert(axis, 0);
            (e, c)
        });
        ReducedPoly::from_terms(&sup, terms.collect::<Vec<_>>())
    }

    /// The reduced polynomial of `x ↦ self(tau(x))`, computed by permuting
    /// the evaluation table and interpolating.
    pub fn affine_substitute(&self, tau: &AffineMap) -> Result<ReducedPoly, PolyError> {
        if tau.translation().len() != self.m() {
            return Err(GeometryError::DimensionMismatch { expected: self.m(), got: tau.translation().len() }.into());
        }
        AffineMap::new(&self.space, tau.matrix().to_vec(), tau.translation().to_vec())?;
        Ok(ReducedPoly::interpolate(&self.to_table().compose(tau)))
    }

    /// Random polynomial with each monomial of degree ≤ `max_degree` present
    /// with probability `density`.
    pub fn random<R: Rng + ?Sized>(space: &Space, rng: &mut R, max_degree: u32, density: f64) -> ReducedPoly {
        let q = space.q();
        let mut terms = Vec::new();
        for mono in monomials_up_to(q, space.m(), max_degree) {
            if rng.gen_bool(density) {
                terms.push((mono.0, rng.gen_range(1..q) as u16));
            }
        }
        ReducedPoly::from_terms(space, terms).expect("generated terms are well formed")
    }

    /// Parses the text form, e.g. `2*x1^2*x3 + x2 + 1`.
    pub fn parse(space: &Space, text: &str) -> Result<ReducedPoly, PolyError> {
        let f = space.field();
        let err = |msg: &str| PolyError::Parse(format!("{msg} in `{text}`"));
        let mut out = Vec::new();
        if text.trim().is_empty() {
            return Err(err("empty input"));
        }
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let mut coef = 1u16;
            let mut exps = vec![0u32; space.m()];
            for factor in term.split('*').map(str::trim) {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, e)) => (i, e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.trim().parse().map_err(|_| err("bad variable index"))?;
                    if idx == 0 || idx > space.m() {
                        return Err(err(&format!("variable x{idx} out of range")));
                    }
                    exps[idx - 1] += pow;
                } else {
                    let c: u32 = factor.parse().map_err(|_| err(&format!("bad factor `{factor}`")))?;
                    if c >= space.q() {
                        return Err(err(&format!("coefficient {c} is not an element code")));
                    }
                    coef = f.mul(coef, c as u16);
                }
            }
            let q = space.q();
            out.push((exps.into_iter().map(|e| if e == 0 { 0 } else { reduce_exponent(e, q) }).collect(), coef));
        }
        ReducedPoly::from_terms(space, out)
    }
}

impl fmt::Display for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mono, &c)| {
                let vars: Vec<String> = mono
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                match (vars.is_empty(), c) {
                    (true, _) => c.to_string(),
                    (false, 1) => vars.join("*"),
                    (false, _) => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_axis(space: &Space, axis: usize) -> Result<(), PolyError> {
    if axis >= space.m() {
        return Err(PolyError::Axis { axis, m: space.m() });
    }
    Ok(())
}

fn check_code(space: &Space, a: u16) -> Result<(), PolyError> {
    if a as u32 >= space.q() {
        return Err(PolyError::BadCode(a as u32));
    }
    Ok(())
}
