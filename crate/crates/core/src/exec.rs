//! Partial symmetries, the quasi-execution and execution formulas, the
//! language quasi-execution, and nilpotency of cut loops.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{AlgElem, Lang, Paired, ReductionMode, RingHom, Semiring};
use crate::mall::OccId;
use crate::matrix::{FMatrix, Grid, Index, LMatrix, Matrix};

pub const DEFAULT_BOUND: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("no zero power of the cut loop within {0} steps")]
    Divergent(usize),
}

/// `σ_Δ`: swaps the two occurrences of every cut pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartialSymmetry {
    pub pairs: Vec<[OccId; 2]>,
}

impl PartialSymmetry {
    pub fn new(pairs: Vec<[OccId; 2]>) -> Self {
        PartialSymmetry { pairs }
    }

    pub fn delta(&self) -> Vec<OccId> {
        self.pairs.iter().flatten().copied().collect()
    }

    /// `σ1 ⊗ σ2`.
    pub fn tensor(&self, other: &PartialSymmetry) -> PartialSymmetry {
        PartialSymmetry { pairs: self.pairs.iter().chain(&other.pairs).copied().collect() }
    }

    pub fn grid<T: Semiring>(&self) -> Grid<T> {
        let d = self.delta();
        let mut g = Grid::zero(d.clone(), d);
        for [x, y] in &self.pairs {
            g.set(*x, *y, T::one());
            g.set(*y, *x, T::one());
        }
        g
    }

    pub fn matrix<T: Semiring>(&self) -> Matrix<T> {
        let index = Index::new(self.pairs.clone(), vec![]);
        let mut m = Matrix::zero(index);
        for (r, c, v) in self.grid::<T>().entries() {
            m.set(r, c, v.clone());
        }
        m
    }
}

/// `σ_Δ` for all the cuts of a matrix.
pub fn sigma(index: &Index) -> PartialSymmetry {
    PartialSymmetry::new(index.cuts.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nilpotency {
    /// The first power of `σU_Δ^Δ` that vanishes.
    Index(usize),
    Divergent {
        bound: usize,
    },
}

impl Nilpotency {
    pub fn index(self) -> Option<usize> {
        match self {
            Nilpotency::Index(n) => Some(n),
            Nilpotency::Divergent { .. } => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, Nilpotency::Divergent { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExecReport<T> {
    /// Indexed by the cuts left alone and the conclusions.
    pub matrix: Matrix<T>,
    pub nilpotency: Nilpotency,
    /// `None` for the language formula.
    pub mode: Option<ReductionMode>,
    /// The powers `(σU_Δ^Δ)^n` for `n < n0`, when requested.
    pub trace: Vec<Grid<T>>,
}

/// Settings for one power iteration.
#[derive(Clone, Copy, Debug)]
pub struct ExecOptions {
    pub bound: usize,
    pub trace: bool,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions { bound: DEFAULT_BOUND, trace: false }
    }
}

impl ExecOptions {
    pub fn bound(bound: usize) -> Self {
        ExecOptions { bound, trace: false }
    }
}

fn split_index(u: &Index, s: &PartialSymmetry) -> Result<Index, ExecError> {
    for pair in &s.pairs {
        if !u.cuts.contains(pair) {
            return Err(ExecError::IndexMismatch(format!("cut [{}, {}] is not a cut of the matrix", pair[0], pair[1])));
        }
    }
    let rest = u.cuts.iter().filter(|c| !s.pairs.contains(c)).copied().collect();
    Ok(Index::new(rest, u.concl.clone()))
}

/// Resolved matrix, nilpotency and the traced powers.
type Series<T> = (Matrix<T>, Nilpotency, Vec<Grid<T>>);

/// `U_Γ^Γ + Σ_{n<n0} U_Γ^Δ (σU_Δ^Δ)^n σU_Δ^Γ`, truncated at the first power
/// for which `vanishes` holds. Each power is passed through `tidy`, which
/// must be a ring map compatible with `vanishes`.
fn series<T: Semiring>(
    s: &PartialSymmetry,
    u: &Matrix<T>,
    opts: ExecOptions,
    vanishes: impl Fn(&Grid<T>) -> bool,
    tidy: impl Fn(&T) -> T,
) -> Result<Series<T>, ExecError> {
    let out_index = split_index(&u.index, s)?;
    let gamma = out_index.all();
    let delta = s.delta();
    let sg = s.grid::<T>();
    let loop_ = sg.mul(&u.block(&delta, &delta)).map(&tidy);
    let exit = sg.mul(&u.block(&delta, &gamma)).map(&tidy);
    let enter = u.block(&gamma, &delta);
    let mut sum = u.block(&gamma, &gamma);
    let mut power = Grid::<T>::identity(delta);
    let mut trace = Vec::new();
    let mut nilpotency = Nilpotency::Divergent { bound: opts.bound };
    for n in 0..=opts.bound {
        if vanishes(&power) {
            nilpotency = Nilpotency::Index(n);
            break;
        }
        if n == opts.bound {
            break;
        }
        sum = sum.add(&enter.mul(&power).mul(&exit)).map(&tidy);
        let next = power.mul(&loop_).map(&tidy);
        if opts.trace {
            trace.push(power);
        }
        power = next;
    }
    Ok((sum.into_matrix(out_index), nilpotency, trace))
}

/// `qEx(σ, U)` computed in the quotient `mode`. `σ` may cover only some of
/// the cuts of `U`; the others stay cuts of the result.
pub fn qexec(
    s: &PartialSymmetry,
    u: &FMatrix,
    mode: &ReductionMode,
    opts: ExecOptions,
) -> Result<ExecReport<AlgElem>, ExecError> {
    let (matrix, nilpotency, trace) =
        series(s, u, opts, |g| g.entries().all(|(_, _, x)| mode.is_zero(x)), |x| mode.reduce_elem(x))?;
    Ok(ExecReport { matrix, nilpotency, mode: Some(mode.clone()), trace })
}

/// `Ex(d, σ, U) = d^Γ(qEx(σ, U))`. Fails when `qEx` does not terminate.
pub fn exec(
    d: &RingHom,
    s: &PartialSymmetry,
    u: &FMatrix,
    mode: &ReductionMode,
    bound: usize,
) -> Result<FMatrix, ExecError> {
    let r = qexec(s, u, mode, ExecOptions::bound(bound))?;
    if let Nilpotency::Divergent { bound } = r.nilpotency {
        return Err(ExecError::Divergent(bound));
    }
    Ok(r.matrix.apply_hom(d).reduce(mode))
}

/// `qex(σ, m)` truncated at the first structurally empty power.
pub fn qexec_lang(s: &PartialSymmetry, m: &LMatrix, opts: ExecOptions) -> Result<ExecReport<Lang>, ExecError> {
    let (matrix, nilpotency, trace) = series(s, m, opts, |g| g.is_zero(), |x| x.clone())?;
    Ok(ExecReport { matrix, nilpotency, mode: None, trace })
}

fn pair_matrix(u: &FMatrix, m: &LMatrix) -> Result<Matrix<Paired>, ExecError> {
    if u.index != m.index {
        return Err(ExecError::IndexMismatch("interpretation and measure are indexed differently".into()));
    }
    let keys: BTreeSet<(OccId, OccId)> =
        u.entries().map(|(r, c, _)| (r, c)).chain(m.entries().map(|(r, c, _)| (r, c))).collect();
    Ok(Matrix::from_entries(
        u.index.clone(),
        keys.into_iter().map(|(r, c)| (r, c, Paired { elem: u.get(r, c), lang: m.get(r, c) })),
    ))
}

/// A pair `x : m` is zero when `x` vanishes modulo `m`.
pub fn paired_is_zero(x: &Paired) -> bool {
    ReductionMode::from_lang(&x.lang).is_zero(&x.elem)
}

/// `qEx` and `qex` run together on `U : m`, truncated by paired nilpotency.
pub fn qexec_paired(
    s: &PartialSymmetry,
    u: &FMatrix,
    m: &LMatrix,
    opts: ExecOptions,
) -> Result<ExecReport<Paired>, ExecError> {
    let pm = pair_matrix(u, m)?;
    let cplus = ReductionMode::cplus();
    let (matrix, nilpotency, trace) = series(
        s,
        &pm,
        opts,
        |g| g.entries().all(|(_, _, x)| paired_is_zero(x)),
        |x| Paired { elem: cplus.reduce_elem(&x.elem), lang: x.lang.clone() },
    )?;
    Ok(ExecReport { matrix, nilpotency, mode: Some(cplus), trace })
}

/// `qex(σ, m)` truncated jointly with the paired run on `U : m`.
pub fn qexec_measure(
    s: &PartialSymmetry,
    u: &FMatrix,
    m: &LMatrix,
    opts: ExecOptions,
) -> Result<ExecReport<Lang>, ExecError> {
    let r = qexec_paired(s, u, m, opts)?;
    Ok(ExecReport {
        matrix: r.matrix.map_into(|x| x.lang.clone()),
        nilpotency: r.nilpotency,
        mode: None,
        trace: r.trace.iter().map(|g| g.map_into(|x| x.lang.clone())).collect(),
    })
}

/// The first `n` with `(σU : σm)_Δ^Δ)^n` zero entrywise modulo the measure.
pub fn pair_nilpotency(s: &PartialSymmetry, u: &FMatrix, m: &LMatrix, bound: usize) -> Result<Nilpotency, ExecError> {
    Ok(qexec_paired(s, u, m, ExecOptions::bound(bound))?.nilpotency)
}

/// Nilpotency of `σU_Δ^Δ` with `aā = 0` for every weight.
pub fn slice_nilpotency(s: &PartialSymmetry, u: &FMatrix, bound: usize) -> Result<Nilpotency, ExecError> {
    Ok(qexec(s, u, &ReductionMode::cplustimes(), ExecOptions::bound(bound))?.nilpotency)
}

fn finished(r: ExecReport<AlgElem>) -> Result<FMatrix, ExecError> {
    match r.nilpotency {
        Nilpotency::Index(_) => Ok(r.matrix),
        Nilpotency::Divergent { bound } => Err(ExecError::Divergent(bound)),
    }
}

/// Both sides of `qEx(σ2 ⊗ σ1, U) = qEx(σ2, qEx(σ1, U))`.
pub fn assoc_sides(
    s1: &PartialSymmetry,
    s2: &PartialSymmetry,
    u: &FMatrix,
    mode: &ReductionMode,
    bound: usize,
) -> Result<(FMatrix, FMatrix), ExecError> {
    let opts = ExecOptions::bound(bound);
    let lhs = finished(qexec(&s2.tensor(s1), u, mode, opts)?)?;
    let inner = finished(qexec(s1, u, mode, opts)?)?;
    let rhs = finished(qexec(s2, &inner, mode, opts)?)?;
    Ok((lhs, rhs))
}

pub fn check_assoc(
    s1: &PartialSymmetry,
    s2: &PartialSymmetry,
    u: &FMatrix,
    mode: &ReductionMode,
    bound: usize,
) -> Result<bool, ExecError> {
    let (lhs, rhs) = assoc_sides(s1, s2, u, mode, bound)?;
    Ok(lhs.equal_mod(&rhs, mode))
}

/// Outcome of the two hom identities for a split `σ1 ⊗ σ2` of the cuts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AssocHom {
    /// `Ex(d1 ⊎ d2, σ1⊗σ2, U) = Ex(d1, σ1, Ex(Res(d2), σ2, U))`, for `d2`
    /// landing in the literals of the conclusions.
    pub res: bool,
    /// `Ex(d1 ⊎ Ind(d2), σ1⊗σ2, U) = Ex(d1, σ1, Ex(d2, σ2, U))`, for `d2`
    /// landing in the literals of the `σ1` cuts and the conclusions.
    pub ind: bool,
}

pub fn check_assoc_hom(
    d1: &RingHom,
    d2: &RingHom,
    s1: &PartialSymmetry,
    s2: &PartialSymmetry,
    u: &FMatrix,
    mode: &ReductionMode,
    bound: usize,
) -> Result<AssocHom, ExecError> {
    let both = s1.tensor(s2);
    let union = |d: &RingHom| d1.union(d).map_err(|e| ExecError::IndexMismatch(e.to_string()));
    let res = {
        let lhs = exec(&union(&d2.res())?, &both, u, mode, bound)?;
        let rhs = exec(d1, s1, &exec(&d2.res(), s2, u, mode, bound)?, mode, bound)?;
        lhs.equal_mod(&rhs, mode)
    };
    let ind = {
        let lhs = exec(&union(&d2.ind(d1))?, &both, u, mode, bound)?;
        let rhs = exec(d1, s1, &exec(d2, s2, u, mode, bound)?, mode, bound)?;
        lhs.equal_mod(&rhs, mode)
    };
    Ok(AssocHom { res, ind })
}
