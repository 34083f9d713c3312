//! Generalized Reed-Muller codes R_q(r, m).

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::geometry::{GeometryError, Space};
use crate::poly::{monomials_up_to, EvaluationTable, Monomial, PolyError, ReducedPoly};

/// Default cap on the number of codewords (exhaustive mode) or group
/// elements (orbit mode) an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("order r = {r} out of range 0..={max}")]
    OrderOutOfRange { r: u32, max: u32 },
    #[error("number of variables must be at least 1")]
    NoVariables,
    #[error("{what} needs {needed} steps but the budget is {budget}; {hint}")]
    BudgetExceeded { what: &'static str, needed: String, budget: u64, hint: &'static str },
    #[error("not a codeword of R_{q}({r},{m}): interpolated degree {degree} exceeds {r}")]
    NotCodeword { q: u32, r: u32, m: usize, degree: String },
    #[error("invalid canonical word parameters: {0}")]
    InvalidCanonical(String),
    #[error("r = m(q-1) lies outside the range r < m(q-1) covered by the classification")]
    OutsideTheoremRange,
    #[error("table is over F_{got_q}^{got_m}, code is over F_{q}^{m}")]
    SpaceMismatch { q: u32, m: usize, got_q: u32, got_m: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Writes `r = t(q-1) + s` with `0 <= s <= q-2`.
pub fn decompose_order(r: u32, q: u32) -> (u32, u32) {
    (r / (q - 1), r % (q - 1))
}

/// Parameters of R_q(r, m) together with the derived `t`, `s`, minimum
/// weight and dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrmParams {
    space: Space,
    r: u32,
    t: u32,
    s: u32,
    w_min: usize,
    dim: usize,
}

impl GrmParams {
    pub fn new(field: Field, m: usize, r: u32) -> Result<GrmParams, CodeError> {
        if m == 0 {
            return Err(CodeError::NoVariables);
        }
        let q = field.q();
        let max = m as u32 * (q - 1);
        if r > max {
            return Err(CodeError::OrderOutOfRange { r, max });
        }
        let space = Space::new(field, m)?;
        let (t, s) = decompose_order(r, q);
        let w_min = if r == max { 1 } else { (q - s) as usize * (q as usize).pow(m as u32 - t - 1) };
        let dim = monomials_up_to(q, m, r).len();
        Ok(GrmParams { space, r, t, s, w_min, dim })
    }

    pub fn with_order(q: u32, m: usize, r: u32) -> Result<GrmParams, CodeError> {
        GrmParams::new(Field::with_order(q)?, m, r)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn min_weight(&self) -> usize {
        self.w_min
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Whether `r < m(q-1)`.
    pub fn in_theorem_range(&self) -> bool {
        self.t < self.m() as u32
    }

    /// Monomial basis of the code, in monomial order.
    pub fn basis(&self) -> Vec<Monomial> {
        monomials_up_to(self.q(), self.m(), self.r)
    }

    /// Number of codewords, q^dim, if it fits in a u64.
    pub fn size(&self) -> Option<u64> {
        (self.q() as u64).checked_pow(self.dim as u32)
    }

    fn check_table(&self, table: &EvaluationTable) -> Result<(), CodeError> {
        if table.space() != &self.space {
            return Err(CodeError::SpaceMismatch {
                q: self.q(),
                m: self.m(),
                got_q: table.space().q(),
                got_m: table.space().m(),
            });
        }
        Ok(())
    }
}

/// `(q-s)·q^(m-t-1)`, or 1 when `r = m(q-1)`.
pub fn min_weight(params: &GrmParams) -> usize {
    params.min_weight()
}

/// Number of reduced monomials of degree at most r.
pub fn dimension(params: &GrmParams) -> usize {
    params.dimension()
}

/// Number of nonzero entries of a table.
pub fn weight(table: &EvaluationTable) -> usize {
    table.weight()
}

/// Membership: the interpolated polynomial has degree at most r.
pub fn contains(params: &GrmParams, table: &EvaluationTable) -> Result<bool, CodeError> {
    params.check_table(table)?;
    Ok(ReducedPoly::interpolate(table).degree().at_most(params.r))
}

/// A codeword viewed through its evaluation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    table: EvaluationTable,
    weight: usize,
}

impl Codeword {
    pub fn from_table(table: EvaluationTable) -> Codeword {
        let weight = table.weight();
        Codeword { table, weight }
    }

    pub fn from_poly(poly: &ReducedPoly) -> Codeword {
        Codeword::from_table(poly.to_table())
    }

    pub fn table(&self) -> &EvaluationTable {
        &self.table
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Sorted point indices where the word is nonzero.
    pub fn support(&self) -> Vec<usize> {
        self.table.support()
    }

    pub fn poly(&self) -> ReducedPoly {
        ReducedPoly::interpolate(&self.table)
    }
}

/// `c·Π_{i<=t}(x_i^(q-1) - 1)·Π_j (x_{t+1} - b_j)`.
pub fn canonical_min_word(params: &GrmParams, c: u16, b: &[u16]) -> Result<Codeword, CodeError> {
    let q = params.q();
    let sp = params.space();
    if !params.in_theorem_range() {
        return Err(CodeError::InvalidCanonical("t = m has no canonical minimal word".into()));
    }
    if c == 0 || c as u32 >= q {
        return Err(CodeError::InvalidCanonical(format!("c = {c} must be a nonzero element")));
    }
    if b.len() != params.s() as usize {
        return Err(CodeError::InvalidCanonical(format!("expected s = {} roots, got {}", params.s(), b.len())));
    }
    let mut seen = HashSet::new();
    for &bj in b {
        if bj as u32 >= q || !seen.insert(bj) {
            return Err(CodeError::InvalidCanonical(format!("roots must be distinct elements, got {b:?}")));
        }
    }
    let f = sp.field();
    let mut poly = ReducedPoly::constant(sp, c);
    for i in 0..params.t() as usize {
        let mut e = vec![0u16; sp.m()];
        e[i] = (q - 1) as u16;
        let factor = ReducedPoly::from_terms(sp, [(e, 1), (vec![0; sp.m()], f.neg(1))])?;
        poly = poly.mul(&factor)?;
    }
    for &bj in b {
        poly = poly.mul(&ReducedPoly::linear(sp, params.t() as usize, bj)?)?;
    }
    Ok(Codeword::from_poly(&poly))
}

/// Every canonical minimal word: all nonzero `c` and all `s`-subsets of roots.
pub fn canonical_min_words(params: &GrmParams) -> Result<Vec<Codeword>, CodeError> {
    let q = params.q() as u16;
    let mut subsets = Vec::new();
    combinations(q, params.s() as usize, 0, &mut Vec::new(), &mut subsets);
    let mut out = Vec::new();
    for c in 1..q {
        for b in &subsets {
            out.push(canonical_min_word(params, c, b)?);
        }
    }
    Ok(out)
}

fn combinations(n: u16, k: usize, start: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for x in start..n {
        cur.push(x);
        combinations(n, k, x + 1, cur, out);
        cur.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Orbit,
}

/// Result of visiting every codeword.
#[derive(Debug, Clone)]
pub struct ExhaustiveScan {
    pub codewords: u64,
    /// Smallest weight of a nonzero codeword.
    pub min_nonzero_weight: Option<usize>,
    /// Words of weight exactly `w_min`, sorted by table.
    pub min_words: Vec<Codeword>,
}

/// Visits all q^dim codewords, tracking the minimum nonzero weight and
/// collecting the words of weight `w_min`.
pub fn exhaustive_scan(params: &GrmParams, budget: u64) -> Result<ExhaustiveScan, CodeError> {
    let total = match params.size() {
        Some(n) if n <= budget => n,
        other => {
            return Err(CodeError::BudgetExceeded {
                what: "exhaustive enumeration",
                needed: other.map_or_else(|| format!("{}^{}", params.q(), params.dim), |n| n.to_string()),
                budget,
                hint: "use orbit mode or raise the budget",
            })
        }
    };
    let sp = params.space();
    let f = sp.field();
    let q = params.q() as u64;
    let n = sp.size();
    let basis: Vec<Vec<u16>> = params
        .basis()
        .into_iter()
        .map(|mono| ReducedPoly::from_terms(sp, [(mono.exponents().to_vec(), 1)]).unwrap().to_table().into_values())
        .collect();
    let dim = basis.len();
    let w_min = params.min_weight();
    let chunk = 1u64 << 12;
    let chunks = total.div_ceil(chunk);

    let partial: Vec<(Option<usize>, Vec<Vec<u16>>)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let lo = ci * chunk;
            let hi = (lo + chunk).min(total);
            let mut digits = vec![0u16; dim];
            let mut rest = lo;
            for d in digits.iter_mut() {
                *d = (rest % q) as u16;
                rest /= q;
            }
            let mut table = vec![0u16; n];
            for (d, b) in digits.iter().zip(&basis) {
                if *d != 0 {
                    for (v, &bv) in table.iter_mut().zip(b) {
                        *v = f.add(*v, f.mul(*d, bv));
                    }
                }
            }
            let mut best: Option<usize> = None;
            let mut found = Vec::new();
            for idx in lo..hi {
                let w = table.iter().filter(|&&v| v != 0).count();
                if w > 0 {
                    best = Some(best.map_or(w, |b| b.min(w)));
                    if w == w_min {
                        found.push(table.clone());
                    }
                }
                if idx + 1 == hi {
                    break;
                }
                // odometer step, updating the table by the changed digits
                for (pos, d) in digits.iter_mut().enumerate() {
                    let old = *d;
                    let new = if old as u64 + 1 == q { 0 } else { old + 1 };
                    let delta = f.sub(new, old);
                    for (v, &bv) in table.iter_mut().zip(&basis[pos]) {
                        *v = f.add(*v, f.mul(delta, bv));
                    }
                    *d = new;
                    if new != 0 {
                        break;
                    }
                }
            }
            (best, found)
        })
        .collect();

    let mut min_nonzero_weight = None;
    let mut words = Vec::new();
    for (best, found) in partial {
        if let Some(b) = best {
            min_nonzero_weight = Some(min_nonzero_weight.map_or(b, |x: usize| x.min(b)));
        }
        words.extend(found);
    }
    words.sort_unstable();
    let min_words = words.into_iter().map(|v| Codeword::from_table(EvaluationTable::from_raw(sp, v))).collect();
    Ok(ExhaustiveScan { codewords: total, min_nonzero_weight, min_words })
}

/// The affine group GA_m(F_q): all invertible matrices, combined with all
/// translations on demand.
#[derive(Debug, Clone)]
pub struct AffineGroup {
    space: Space,
    matrices: Vec<Vec<Vec<u16>>>,
}

/// |GL_m(F_q)| = Π_{i<m} (q^m - q^i), if it fits in a u64.
pub fn general_linear_order(q: u32, m: usize) -> Option<u64> {
    let qm = (q as u64).checked_pow(m as u32)?;
    (0..m as u32).try_fold(1u64, |acc, i| acc.checked_mul(qm - (q as u64).pow(i)))
}

impl AffineGroup {
    /// Enumerates GL_m(F_q) row by row, rejecting each candidate row that
    /// lies in the span of the rows chosen so far.
    pub fn new(space: &Space, budget: u64) -> Result<AffineGroup, CodeError> {
        let q = space.q();
        let m = space.m();
        let order = general_linear_order(q, m).and_then(|g| g.checked_mul(space.size() as u64));
        if order.is_none_or(|o| o > budget) {
            return Err(CodeError::BudgetExceeded {
                what: "affine group enumeration",
                needed: order.map_or_else(|| "more than 2^64".to_string(), |o| o.to_string()),
                budget,
                hint: "reduce q or m, or raise the budget",
            });
        }
        let vectors: Vec<Vec<u16>> = (0..space.size()).map(|i| space.coords(i)).collect();
        let mut matrices = Vec::new();
        let mut rows = Vec::new();
        let mut in_span = vec![false; space.size()];
        in_span[0] = true;
        Self::extend(space, &vectors, &mut rows, &in_span, &mut matrices);
        Ok(AffineGroup { space: space.clone(), matrices })
    }

    fn extend(
        space: &Space,
        vectors: &[Vec<u16>],
        rows: &mut Vec<Vec<u16>>,
        in_span: &[bool],
        out: &mut Vec<Vec<Vec<u16>>>,
    ) {
        if rows.len() == space.m() {
            out.push(rows.clone());
            return;
        }
        for (i, v) in vectors.iter().enumerate() {
            if in_span[i] {
                continue;
            }
            let mut next = vec![false; in_span.len()];
            for (j, &member) in in_span.iter().enumerate() {
                if member {
                    for c in space.field().elements() {
                        next[space.index(&space.add(&vectors[j], &space.scale(c, v)))] = true;
                    }
                }
            }
            rows.push(v.clone());
            Self::extend(space, vectors, rows, &next, out);
            rows.pop();
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn linear_parts(&self) -> &[Vec<Vec<u16>>] {
        &self.matrices
    }

    /// |GA_m(F_q)|.
    pub fn order(&self) -> u64 {
        self.matrices.len() as u64 * self.space.size() as u64
    }

    /// Point permutations of every group element sharing the linear part
    /// `matrix`, one per translation in point order.
    pub fn permutations_for(&self, matrix: &[Vec<u16>]) -> impl Iterator<Item = Vec<u32>> + '_ {
        let sp = &self.space;
        let images: Vec<Vec<u16>> = (0..sp.size())
            .map(|i| {
                let x = sp.coords(i);
                matrix.iter().map(|row| crate::linalg::dot(sp.field(), row, &x)).collect()
            })
            .collect();
        (0..sp.size()).map(move |b| {
            let shift = sp.coords(b);
            images.iter().map(|ax| sp.index(&sp.add(ax, &shift)) as u32).collect()
        })
    }

    /// Union of the orbits of `words`, deduplicated and sorted by table.
    pub fn orbit_closure(&self, words: &[Codeword]) -> Vec<Codeword> {
        let set: HashSet<Vec<u16>> = self
            .matrices
            .par_iter()
            .fold(HashSet::new, |mut acc, a| {
                for perm in self.permutations_for(a) {
                    for w in words {
                        let v = w.table().values();
                        acc.insert(perm.iter().map(|&j| v[j as usize]).collect::<Vec<u16>>());
                    }
                }
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            });
        let mut tables: Vec<Vec<u16>> = set.into_iter().collect();
        tables.sort_unstable();
        tables.into_iter().map(|v| Codeword::from_table(EvaluationTable::from_raw(&self.space, v))).collect()
    }
}

/// `{f∘τ : τ ∈ GA_m(F_q)}`, sorted by table.
pub fn affine_orbit(f: &Codeword, params: &GrmParams, budget: u64) -> Result<Vec<Codeword>, CodeError> {
    require_member(params, f.table())?;
    let group = AffineGroup::new(params.space(), budget)?;
    Ok(group.orbit_closure(std::slice::from_ref(f)))
}

pub(crate) fn require_member(params: &GrmParams, table: &EvaluationTable) -> Result<(), CodeError> {
    params.check_table(table)?;
    let degree = ReducedPoly::interpolate(table).degree();
    if !degree.at_most(params.r()) {
        return Err(CodeError::NotCodeword { q: params.q(), r: params.r(), m: params.m(), degree: degree.to_string() });
    }
    Ok(())
}

/// Minimum-weight codewords, sorted by table. Exhaustive mode scans the
/// whole code; orbit mode closes the canonical minimal words under the
/// affine group.
pub fn enumerate_min_words(params: &GrmParams, mode: Mode, budget: u64) -> Result<Vec<Codeword>, CodeError> {
    match mode {
        Mode::Exhaustive => Ok(exhaustive_scan(params, budget)?.min_words),
        Mode::Orbit => {
            if !params.in_theorem_range() {
                return Err(CodeError::OutsideTheoremRange);
            }
            let group = AffineGroup::new(params.space(), budget)?;
            Ok(group.orbit_closure(&canonical_min_words(params)?))
        }
    }
}
