//! Verification engine: classification of minimum-weight codewords as
//! unions of parallel flats, the converse construction, and checkers for the
//! hyperplane-intersection dichotomy and the avoiding-hyperplane lemma.
//!
//! A `Fails` verdict or a `Violation` branch on verified input means the
//! classification disagrees with a proven statement; at these sizes that is
//! always an implementation bug, so reports carry the full witness.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::{
    canonical_min_words, contains, exhaustive_scan, require_member, AffineGroup, CodeError, Codeword, GrmParams, Mode,
    DEFAULT_BUDGET,
};
use crate::geometry::{
    find_avoiding_hyperplane, flats_union_classify, AffineMap, AvoidOutcome, Flat, GeometryError, Hyperplane, Space,
    UnionStructure,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("not minimal: weight {weight}, minimum weight is {w_min}")]
    NotMinimal { weight: usize, w_min: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl AnalysisError {
    pub fn is_not_codeword(&self) -> bool {
        matches!(self, AnalysisError::Code(CodeError::NotCodeword { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Matches,
    Fails,
}

/// Flat in both parametric and equation form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatView {
    pub base: Vec<u16>,
    pub directions: Vec<Vec<u16>>,
    pub codim: usize,
    pub equations: String,
}

impl FlatView {
    pub fn new(space: &Space, flat: &Flat) -> FlatView {
        FlatView {
            base: flat.base().to_vec(),
            directions: flat.directions().to_vec(),
            codim: flat.codim(),
            equations: space.describe(flat),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub table: String,
    pub ambient: Option<FlatView>,
    pub direction: Option<Vec<u16>>,
    pub offsets: Vec<u16>,
    pub components: Vec<FlatView>,
    /// Why the verdict is `Fails`, if it is.
    pub detail: Option<String>,
}

impl ClassificationReport {
    fn failed(f: &Codeword, detail: String) -> ClassificationReport {
        ClassificationReport {
            verdict: Verdict::Fails,
            table: f.table().to_string(),
            ambient: None,
            direction: None,
            offsets: vec![],
            components: vec![],
            detail: Some(detail),
        }
    }
}

/// Classifies a minimum-weight codeword's support as `q-s` parallel flats of
/// codimension `t+1` inside a flat of codimension `t`.
pub fn classify_min_word(f: &Codeword, params: &GrmParams) -> Result<ClassificationReport, AnalysisError> {
    if !params.in_theorem_range() {
        return Err(CodeError::OutsideTheoremRange.into());
    }
    require_member(params, f.table())?;
    if f.weight() != params.min_weight() {
        return Err(AnalysisError::NotMinimal { weight: f.weight(), w_min: params.min_weight() });
    }
    let sp = params.space();
    let support = f.support();
    let Some(structure) = flats_union_classify(sp, &support, params.t() as usize, params.s() as usize)? else {
        return Ok(ClassificationReport::failed(f, "no union-of-parallel-flats decomposition".into()));
    };
    if let Some(detail) = structure_defect(sp, &structure, &support, params) {
        return Ok(ClassificationReport::failed(f, detail));
    }
    let UnionStructure { ambient, direction, offsets, components } = structure;
    Ok(ClassificationReport {
        verdict: Verdict::Matches,
        table: f.table().to_string(),
        ambient: Some(FlatView::new(sp, &ambient)),
        direction: Some(direction),
        offsets,
        components: components.iter().map(|c| FlatView::new(sp, c)).collect(),
        detail: None,
    })
}

fn structure_defect(sp: &Space, u: &UnionStructure, support: &[usize], params: &GrmParams) -> Option<String> {
    let (t, s, q) = (params.t() as usize, params.s() as usize, params.q() as usize);
    if u.ambient.codim() != t {
        return Some(format!("ambient codimension {} != {t}", u.ambient.codim()));
    }
    if u.components.len() != q - s {
        return Some(format!("{} components, expected {}", u.components.len(), q - s));
    }
    for c in &u.components {
        if c.codim() != t + 1 || !u.ambient.contains_flat(sp, c) {
            return Some(format!("component {} is not a codim-{} flat of the ambient", sp.describe(c), t + 1));
        }
        if c.directions() != u.components[0].directions() {
            return Some("components are not parallel".into());
        }
    }
    if u.union_points(sp) != support {
        return Some("union of components differs from the support".into());
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma5Branch {
    AllMeet,
    ExactlyQminusS,
    Violation,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma5Report {
    pub hyperplane: String,
    /// `|S ∩ H_c|` for each translate `H_c`, by offset code.
    pub counts: Vec<usize>,
    pub branch: Lemma5Branch,
}

fn lemma5_branch(counts: &[usize], hit: usize, weight: usize, params: &GrmParams) -> Lemma5Branch {
    if hit == 0 || hit == weight {
        return Lemma5Branch::NotApplicable;
    }
    let q = params.q() as usize;
    let layer = q.pow(params.m() as u32 - params.t() - 1);
    let met: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
    if met.len() == q - params.s() as usize && met.iter().all(|&c| c == layer) {
        Lemma5Branch::ExactlyQminusS
    } else if met.len() == q {
        Lemma5Branch::AllMeet
    } else {
        Lemma5Branch::Violation
    }
}

/// Intersection pattern of a minimum-weight word's support with the
/// parallel class of `h`.
pub fn check_lemma5(f: &Codeword, params: &GrmParams, h: &Hyperplane) -> Result<Lemma5Report, AnalysisError> {
    if f.weight() != params.min_weight() {
        return Err(AnalysisError::NotMinimal { weight: f.weight(), w_min: params.min_weight() });
    }
    let sp = params.space();
    let counts = sp.level_counts(h.normal(), &f.support());
    let branch = lemma5_branch(&counts, counts[h.offset() as usize], f.weight(), params);
    Ok(Lemma5Report { hyperplane: h.to_string(), counts, branch })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Lemma5Summary {
    /// (word, hyperplane) pairs with `∅ ≠ S∩H ≠ S`.
    pub pairs_checked: u64,
    pub violations: u64,
    pub not_applicable: u64,
    pub all_meet: u64,
    pub exactly_q_minus_s: u64,
    pub witnesses: Vec<FailureEntry>,
}

/// Runs the dichotomy over every word and every hyperplane.
pub fn lemma5_sweep(words: &[Codeword], params: &GrmParams) -> Lemma5Summary {
    let sp = params.space();
    let normals = sp.normals();
    words
        .par_iter()
        .map(|f| {
            let mut out = Lemma5Summary::default();
            let support = f.support();
            for normal in &normals {
                let counts = sp.level_counts(normal, &support);
                for (offset, &hit) in counts.iter().enumerate() {
                    let branch = lemma5_branch(&counts, hit, f.weight(), params);
                    match branch {
                        Lemma5Branch::NotApplicable => out.not_applicable += 1,
                        Lemma5Branch::AllMeet => out.all_meet += 1,
                        Lemma5Branch::ExactlyQminusS => out.exactly_q_minus_s += 1,
                        Lemma5Branch::Violation => {
                            out.violations += 1;
                            let h = Hyperplane::new(sp, normal.clone(), offset as u16).expect("canonical normal");
                            out.witnesses.push(FailureEntry {
                                table: f.table().to_string(),
                                detail: "intersection pattern fits neither branch".into(),
                                hyperplane: Some(h.to_string()),
                                counts: Some(counts.clone()),
                            });
                        }
                    }
                    if branch != Lemma5Branch::NotApplicable {
                        out.pairs_checked += 1;
                    }
                }
            }
            out
        })
        .reduce(Lemma5Summary::default, |mut a, b| {
            a.pairs_checked += b.pairs_checked;
            a.violations += b.violations;
            a.not_applicable += b.not_applicable;
            a.all_meet += b.all_meet;
            a.exactly_q_minus_s += b.exactly_q_minus_s;
            a.witnesses.extend(b.witnesses);
            a
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma4Report {
    pub size: usize,
    pub t: usize,
    pub n: u32,
    pub hypothesis_held: bool,
    /// First hyperplane (canonical order) disjoint from the set.
    pub avoiding: Option<String>,
    /// First hyperplane breaking the intersection hypothesis, with its count.
    pub violating: Option<(String, usize)>,
    /// Hypothesis held yet nothing avoids the set.
    pub contradiction: bool,
}

/// Avoiding-hyperplane check for a set of size `t·q^n`.
pub fn check_lemma4(space: &Space, support: &[usize], t: usize, n: u32) -> Result<Lemma4Report, AnalysisError> {
    let outcome = find_avoiding_hyperplane(space, support, t, n)?;
    let size = space.check_set(support)?.len();
    let mut report =
        Lemma4Report { size, t, n, hypothesis_held: true, avoiding: None, violating: None, contradiction: false };
    match outcome {
        AvoidOutcome::Found { hyperplane } => report.avoiding = Some(hyperplane.to_string()),
        AvoidOutcome::HypothesisFails { hyperplane, count } => {
            report.hypothesis_held = false;
            report.violating = Some((hyperplane.to_string(), count));
        }
        AvoidOutcome::NotFound => report.contradiction = true,
    }
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Lemma4Summary {
    pub supports_checked: u64,
    pub avoiding_found: u64,
    pub hypothesis_failures: u64,
    pub failures: Vec<FailureEntry>,
}

/// Lemma-4 check on every support, read with `t' = q-s` and `n' = m-t-1`.
/// Only meaningful for `s >= 1`; returns an empty summary otherwise.
pub fn lemma4_sweep(words: &[Codeword], params: &GrmParams) -> Result<Lemma4Summary, AnalysisError> {
    let mut out = Lemma4Summary::default();
    if params.s() == 0 || !params.in_theorem_range() {
        return Ok(out);
    }
    let t4 = (params.q() - params.s()) as usize;
    let n4 = params.m() as u32 - params.t() - 1;
    let reports: Vec<(usize, Lemma4Report)> = words
        .par_iter()
        .enumerate()
        .map(|(i, f)| check_lemma4(params.space(), &f.support(), t4, n4).map(|r| (i, r)))
        .collect::<Result<_, _>>()?;
    for (i, r) in reports {
        out.supports_checked += 1;
        if r.avoiding.is_some() {
            out.avoiding_found += 1;
            continue;
        }
        if !r.hypothesis_held {
            out.hypothesis_failures += 1;
        }
        let (hyperplane, count) = r.violating.clone().map_or((None, None), |(h, c)| (Some(h), Some(vec![c])));
        out.failures.push(FailureEntry {
            table: words[i].table().to_string(),
            detail: if r.contradiction {
                "hypothesis held but no hyperplane avoids the support".into()
            } else {
                "intersection hypothesis failed".into()
            },
            hyperplane,
            counts: count,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureEntry {
    pub table: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsView {
    pub q: u32,
    pub p: u32,
    pub n: u32,
    pub m: usize,
    pub r: u32,
    pub t: u32,
    pub s: u32,
    pub w_min: usize,
    pub dim: usize,
}

impl From<&GrmParams> for ParamsView {
    fn from(p: &GrmParams) -> Self {
        ParamsView {
            q: p.q(),
            p: p.field().p(),
            n: p.field().n(),
            m: p.m(),
            r: p.r(),
            t: p.t(),
            s: p.s(),
            w_min: p.min_weight(),
            dim: p.dimension(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForwardSummary {
    pub count: usize,
    pub matches: usize,
    pub failures: Vec<FailureEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConverseSummary {
    pub count: usize,
    pub pass: usize,
    pub failures: Vec<FailureEntry>,
}

/// Exhaustive scan outcome: observed minimum weight and set agreement with
/// the orbit construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveSummary {
    pub codewords: u64,
    pub min_weight_observed: Option<usize>,
    pub min_weight_ok: bool,
    pub min_words: usize,
    pub orbit_words: usize,
    pub sets_equal: bool,
    pub only_exhaustive: Vec<String>,
    pub only_orbit: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivarianceSummary {
    pub seed: u64,
    pub samples: usize,
    pub pass: usize,
    pub failures: Vec<FailureEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub params: ParamsView,
    pub mode: Mode,
    pub forward: ForwardSummary,
    pub converse: ConverseSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<ExhaustiveSummary>,
    pub lemma5: Lemma5Summary,
    pub lemma4: Lemma4Summary,
    pub equivariance: EquivarianceSummary,
    pub runtime_ms: u64,
}

impl VerifyReport {
    /// No failure, violation, disagreement or absence anywhere.
    pub fn is_clean(&self) -> bool {
        self.forward.matches == self.forward.count
            && self.converse.pass == self.converse.count
            && self.exhaustive.as_ref().is_none_or(|e| e.min_weight_ok && e.sets_equal)
            && self.lemma5.violations == 0
            && self.lemma4.avoiding_found == self.lemma4.supports_checked
            && self.equivariance.pass == self.equivariance.samples
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub budget: u64,
    pub seed: u64,
    /// Random (word, affine map) pairs for the equivariance check.
    pub equivariance_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { mode: Mode::Exhaustive, budget: DEFAULT_BUDGET, seed: 0, equivariance_samples: 32 }
    }
}

/// Full verification of one parameter cell.
///
/// Forward: every minimum-weight word (found by `options.mode`) classifies
/// as `Matches`. Converse: every affine image of every canonical word is a
/// codeword of minimum weight. In exhaustive mode the two sets are also
/// compared and the observed minimum weight is checked against the formula.
pub fn verify_theorem(params: &GrmParams, options: &VerifyOptions) -> Result<VerifyReport, AnalysisError> {
    let start = Instant::now();
    if !params.in_theorem_range() {
        return Err(CodeError::OutsideTheoremRange.into());
    }
    let scan = match options.mode {
        Mode::Exhaustive => Some(exhaustive_scan(params, options.budget)?),
        Mode::Orbit => None,
    };
    let group = AffineGroup::new(params.space(), options.budget)?;
    let orbit_words = group.orbit_closure(&canonical_min_words(params)?);
    let words: &[Codeword] = scan.as_ref().map_or(&orbit_words, |s| &s.min_words);

    let reports: Vec<Result<ClassificationReport, AnalysisError>> =
        words.par_iter().map(|f| classify_min_word(f, params)).collect();
    let mut forward = ForwardSummary { count: words.len(), matches: 0, failures: vec![] };
    for (f, r) in words.iter().zip(reports) {
        match r {
            Ok(rep) if rep.verdict == Verdict::Matches => forward.matches += 1,
            Ok(rep) => forward.failures.push(FailureEntry {
                table: rep.table,
                detail: rep.detail.unwrap_or_default(),
                hyperplane: None,
                counts: None,
            }),
            Err(e) => forward.failures.push(FailureEntry {
                table: f.table().to_string(),
                detail: e.to_string(),
                hyperplane: None,
                counts: None,
            }),
        }
    }

    let checks: Vec<Result<bool, CodeError>> =
        orbit_words.par_iter().map(|f| Ok(f.weight() == params.min_weight() && contains(params, f.table())?)).collect();
    let mut converse = ConverseSummary { count: orbit_words.len(), pass: 0, failures: vec![] };
    for (f, ok) in orbit_words.iter().zip(checks) {
        if ok? {
            converse.pass += 1;
        } else {
            converse.failures.push(FailureEntry {
                table: f.table().to_string(),
                detail: format!("affine image of a canonical word has weight {} or is not a codeword", f.weight()),
                hyperplane: None,
                counts: None,
            });
        }
    }

    let exhaustive = scan.as_ref().map(|s| {
        let only_exhaustive: Vec<String> = s
            .min_words
            .iter()
            .filter(|w| orbit_words.binary_search_by(|o| o.table().values().cmp(w.table().values())).is_err())
            .map(|w| w.table().to_string())
            .collect();
        let only_orbit: Vec<String> = orbit_words
            .iter()
            .filter(|w| s.min_words.binary_search_by(|o| o.table().values().cmp(w.table().values())).is_err())
            .map(|w| w.table().to_string())
            .collect();
        ExhaustiveSummary {
            codewords: s.codewords,
            min_weight_observed: s.min_nonzero_weight,
            min_weight_ok: s.min_nonzero_weight == Some(params.min_weight()),
            min_words: s.min_words.len(),
            orbit_words: orbit_words.len(),
            sets_equal: only_exhaustive.is_empty() && only_orbit.is_empty(),
            only_exhaustive,
            only_orbit,
        }
    });

    let lemma5 = lemma5_sweep(words, params);
    let lemma4 = lemma4_sweep(words, params)?;
    let equivariance = equivariance_check(words, params, options.seed, options.equivariance_samples);

    Ok(VerifyReport {
        params: params.into(),
        mode: options.mode,
        forward,
        converse,
        exhaustive,
        lemma5,
        lemma4,
        equivariance,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Classifies `f∘τ` for random words and random affine maps and checks the
/// ambient codimension is still `t`.
pub fn equivariance_check(words: &[Codeword], params: &GrmParams, seed: u64, samples: usize) -> EquivarianceSummary {
    let mut out = EquivarianceSummary { seed, samples: 0, pass: 0, failures: vec![] };
    if words.is_empty() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = params.space();
    for _ in 0..samples {
        let f = &words[rng.gen_range(0..words.len())];
        let tau = AffineMap::random(sp, &mut rng);
        let image = Codeword::from_table(f.table().compose(&tau));
        out.samples += 1;
        let ok = match classify_min_word(&image, params) {
            Ok(rep) => {
                rep.verdict == Verdict::Matches && rep.ambient.as_ref().map(|a| a.codim) == Some(params.t() as usize)
            }
            Err(_) => false,
        };
        if ok {
            out.pass += 1;
        } else {
            out.failures.push(FailureEntry {
                table: image.table().to_string(),
                detail: "affine image did not classify with ambient codimension t".into(),
                hyperplane: None,
                counts: None,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{canonical_min_word, enumerate_min_words};
    use crate::poly::{EvaluationTable, ReducedPoly};

    #[test]
    fn canonical_words_match_with_standard_ambient() {
        let p = GrmParams::with_order(3, 3, 3).unwrap();
        for w in canonical_min_words(&p).unwrap() {
            let rep = classify_min_word(&w, &p).unwrap();
            assert_eq!(rep.verdict, Verdict::Matches);
            assert_eq!(rep.ambient.unwrap().equations, "[1,0,0]=0");
        }
    }

    #[test]
    fn binary_cell_all_match() {
        let p = GrmParams::with_order(2, 3, 1).unwrap();
        let words = enumerate_min_words(&p, Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(words.len(), 14);
        for w in &words {
            assert_eq!(classify_min_word(w, &p).unwrap().verdict, Verdict::Matches);
        }
    }

    #[test]
    fn non_member_is_rejected() {
        // three ones and a zero over F_2^2: weight 3 but degree 2
        let p = GrmParams::with_order(2, 2, 1).unwrap();
        let t = EvaluationTable::new(p.space(), vec![1, 1, 1, 0]).unwrap();
        let err = classify_min_word(&Codeword::from_table(t), &p).unwrap_err();
        assert!(err.is_not_codeword());
        let heavy = Codeword::from_poly(&ReducedPoly::constant(p.space(), 1));
        assert!(matches!(classify_min_word(&heavy, &p), Err(AnalysisError::NotMinimal { .. })));
    }

    #[test]
    fn lemma5_examples() {
        let p = GrmParams::with_order(2, 2, 1).unwrap();
        let sp = p.space();
        let f = Codeword::from_poly(&ReducedPoly::parse(sp, "x1").unwrap());
        let h = Hyperplane::new(sp, vec![0, 1], 0).unwrap();
        let rep = check_lemma5(&f, &p, &h).unwrap();
        assert_eq!(rep.counts, vec![1, 1]);
        assert_eq!(rep.branch, Lemma5Branch::ExactlyQminusS);
        let containing = Hyperplane::new(sp, vec![1, 0], 1).unwrap();
        assert_eq!(check_lemma5(&f, &p, &containing).unwrap().branch, Lemma5Branch::NotApplicable);
    }

    #[test]
    fn lemma4_examples() {
        let sp = Space::new(crate::field::Field::with_order(3).unwrap(), 2).unwrap();
        let line: Vec<usize> = vec![0, 1, 2];
        let rep = check_lemma4(&sp, &line, 1, 1).unwrap();
        assert_eq!(rep.avoiding.as_deref(), Some("[1,0]=1"));
        let all: Vec<usize> = (0..9).collect();
        assert!(check_lemma4(&sp, &all, 1, 2).is_err());
    }

    #[test]
    fn verify_small_cell() {
        let p = GrmParams::with_order(2, 3, 1).unwrap();
        let rep = verify_theorem(&p, &VerifyOptions::default()).unwrap();
        assert_eq!((rep.forward.count, rep.forward.matches), (14, 14));
        assert_eq!(rep.converse.pass, rep.converse.count);
        assert!(rep.exhaustive.as_ref().unwrap().sets_equal);
        assert!(rep.is_clean());
    }

    #[test]
    fn verify_refuses_top_order() {
        let p = GrmParams::with_order(2, 2, 2).unwrap();
        assert!(verify_theorem(&p, &VerifyOptions::default()).is_err());
        let w = canonical_min_word(&GrmParams::with_order(2, 2, 1).unwrap(), 1, &[]).unwrap();
        assert!(classify_min_word(&w, &p).is_err());
    }
}
