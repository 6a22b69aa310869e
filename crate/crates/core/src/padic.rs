//! Lattices over the p-local integers: divided-power integrality, the
//! sublattices `M_I` and their splitting, p-adic HR-forms, Weyl lattices,
//! Weyl filtrations and the tilting verdict.
//!
//! A [`LatticeModule`] stores its operators in lattice coordinates, so the
//! lattice is `Z_(p)^d` at every weight; the basis of the lattice inside an
//! ambient rational module is kept as metadata.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HrError, Result};
use crate::graded::{adjoint_op, contravariant_dual, submodule_mi, BlockForm, GradedModule, GradedOp};
use crate::hrform::{adjoint_family, check_commutators, check_symmetric, Check};
use crate::io::{ModuleData, ModuleFile};
use crate::linalg::Matrix;
use crate::oracle::freudenthal_character;
use crate::paths::{standard_module, StandardOptions};
use crate::roots::{RootSystem, UpSet, Weight};
use crate::scalar::{factorial, int_valuation, is_p_integral, valuation, Field, Rat, Ring};

const Q: Field = Field::Rational;

/// Column-reduced generators of a `Z_(p)`-module of vectors.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    /// Independent columns spanning the same `Z_(p)`-module as the input.
    pub basis: Matrix,
    /// Valuation of each pivot; these are the elementary divisors.
    pub divisors: Vec<i64>,
}

/// Reduces generators by integral column operations only, with full pivoting
/// on the entry of least valuation (ties: smallest row, then column). Pivot
/// columns are not normalized, so natural generators survive unchanged.
pub fn column_reduce(gens: &Matrix, p: u64) -> ColumnReduction {
    let rows = gens.rows();
    let mut cols: Vec<Vec<Rat>> = (0..gens.cols()).map(|j| gens.col(j)).collect();
    let mut used = vec![false; rows];
    let mut divisors = Vec::new();
    let mut k = 0;
    while k < cols.len() {
        let mut best: Option<(i64, usize, usize)> = None;
        for (r, _) in used.iter().enumerate().filter(|(_, u)| !**u) {
            for (c, col) in cols.iter().enumerate().skip(k) {
                if let Some(v) = valuation(&col[r], p) {
                    if best.is_none_or(|b| (v, r, c) < b) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, r, c)) = best else { break };
        cols.swap(k, c);
        used[r] = true;
        let (head, tail) = cols.split_at_mut(k + 1);
        let pivot = &head[k];
        for col in tail.iter_mut() {
            if col[r].is_zero() {
                continue;
            }
            let factor = &col[r] / &pivot[r];
            for (x, y) in col.iter_mut().zip(pivot) {
                *x -= &factor * y;
            }
        }
        divisors.push(v);
        k += 1;
    }
    cols.truncate(k);
    ColumnReduction { basis: Matrix::from_cols(rows, &cols), divisors }
}

/// Basis of `L ∩ span_Q(gens)` where `L = Z_(p)^rows`.
pub fn saturate(gens: &Matrix, p: u64) -> Matrix {
    let red = column_reduce(gens, p);
    let cols: Vec<Vec<Rat>> = red
        .divisors
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let s = pow_p(p, -v);
            red.basis.col(k).into_iter().map(|x| x * &s).collect()
        })
        .collect();
    Matrix::from_cols(gens.rows(), &cols)
}

fn pow_p(p: u64, e: i64) -> Rat {
    let base = Rat::from_integer(p.into());
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        Rat::one() / num_traits::pow(base, (-e) as usize)
    }
}

/// Whether every column of `v` lies in the `Z_(p)`-span of the independent columns of `basis`.
pub fn lattice_contains(basis: &Matrix, v: &Matrix, p: u64) -> bool {
    if v.cols() == 0 || v.is_zero() {
        return true;
    }
    match basis.solve(v, Q) {
        Some(x) => basis.mul(&x, Q) == *v && x.entries().all(|c| is_p_integral(c, p)),
        None => false,
    }
}

pub fn same_lattice(a: &Matrix, b: &Matrix, p: u64) -> bool {
    a.cols() == b.cols() && lattice_contains(a, b, p) && lattice_contains(b, a, p)
}

/// A free `Z_(p)`-module with lowering operators, in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeModule {
    p: u64,
    module: GradedModule,
    basis: BTreeMap<Weight, Matrix>,
}

impl LatticeModule {
    /// `module` must be over `Z_(p)` with p-integral operator blocks. `basis`
    /// defaults to the identity at every weight.
    pub fn new(module: GradedModule, basis: Option<BTreeMap<Weight, Matrix>>) -> Result<Self> {
        let Ring::PLocal(p) = module.ring() else {
            return Err(HrError::WrongRing("module over the p-local integers".into()));
        };
        for (a, op) in module.ops().iter().enumerate() {
            for (mu, b) in &op.blocks {
                if !b.entries().all(|x| is_p_integral(x, p)) {
                    return Err(HrError::Format(format!("F_{} at weight {mu} does not preserve the lattice", a + 1)));
                }
            }
        }
        let basis = match basis {
            Some(b) => {
                for (mu, &d) in module.dims() {
                    match b.get(mu) {
                        Some(m) if m.cols() == d && m.rank(Q) == d => {}
                        _ => return Err(HrError::DimensionMismatch(format!("lattice basis at {mu} is not a basis"))),
                    }
                }
                b
            }
            None => module.dims().iter().map(|(mu, &d)| (mu.clone(), Matrix::identity(d))).collect(),
        };
        Ok(LatticeModule { p, module, basis })
    }

    /// The lattice spanned by the columns of `basis[μ]` inside a rational module.
    pub fn from_ambient(ambient: &GradedModule, basis: BTreeMap<Weight, Matrix>, p: u64) -> Result<Self> {
        let module = ambient.change_basis(&basis)?.with_ring(Ring::p_local(p)?)?;
        Self::new(module, Some(basis))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn basis(&self) -> &BTreeMap<Weight, Matrix> {
        &self.basis
    }

    pub fn root_system(&self) -> &RootSystem {
        self.module.root_system()
    }

    /// The same operators over the rationals (the module `M ⊗ Q`).
    pub fn rational(&self) -> GradedModule {
        self.module.with_ring(Ring::Rational).expect("rational module")
    }

    pub fn to_file(&self, form: Option<&BlockForm>) -> ModuleFile {
        ModuleFile::from_module(&self.module, form).with_lattice(self.p, &self.basis)
    }

    /// Builds a lattice from parsed file data; the ring must be `Zp` or a prime must be given.
    pub fn from_data(data: ModuleData) -> Result<Self> {
        let module = match (data.module.ring(), data.p) {
            (Ring::PLocal(p), q) if q.is_none_or(|q| q == p) => data.module,
            (Ring::Rational, Some(p)) => data.module.with_ring(Ring::p_local(p)?)?,
            _ => return Err(HrError::WrongRing("lattice over Zp with a consistent prime".into())),
        };
        Self::new(module, data.lattice_basis)
    }
}

/// Block of `X^n` from `src` to `src + n·deg X`, zero-filled.
fn power_block(m: &GradedModule, op: &GradedOp, src: &Weight, n: u32) -> Matrix {
    let mut cur = src.clone();
    let mut acc = Matrix::identity(m.dim(src));
    for _ in 0..n {
        let t = op.target(&cur);
        let b = op.block(&cur).cloned().unwrap_or_else(|| Matrix::zeros(m.dim(&t), m.dim(&cur)));
        acc = b.mul(&acc, Q);
        cur = t;
    }
    acc
}

/// Block of `X^n / n!`.
fn divided_block(m: &GradedModule, op: &GradedOp, src: &Weight, n: u32) -> Matrix {
    let nf = Rat::from_integer(factorial(n as u64));
    power_block(m, op, src, n).scale(&(Rat::one() / nf), Q)
}

/// First entry of some `X^n` (n ≥ 1) whose valuation is below `val(n!)`.
fn scan_divided_powers(m: &GradedModule, ops: &[GradedOp], name: &str, p: u64) -> Check {
    for (a, op) in ops.iter().enumerate() {
        let bound = m.longest_string(a);
        for n in 1..bound {
            let need = if n < 2 { 0 } else { int_valuation(&factorial(n as u64), p) };
            for mu in m.support() {
                let power = power_block(m, op, mu, n);
                let bad = power.entries().find(|x| valuation(x, p).is_some_and(|v| v < need)).cloned();
                if let Some(x) = bad {
                    return Check::fail(format!(
                        "{name}_{}^{n} at weight {mu} has entry {x} with valuation {} < val({n}!) = {need}",
                        a + 1,
                        valuation(&x, p).unwrap()
                    ));
                }
            }
        }
    }
    Check::Pass
}

/// `X_α^n(M) ⊂ n!·M` for `F`, and for `E` when `form` is perfect.
pub fn check_divided_powers(l: &LatticeModule, form: Option<&BlockForm>) -> Check {
    let m = l.rational();
    let fcheck = scan_divided_powers(&m, m.ops(), "F", l.p);
    if !fcheck.passed() {
        return fcheck;
    }
    match form.map(|g| perfect_adjoints(l, g)) {
        Some(Ok(e)) => scan_divided_powers(&m, &e, "E", l.p),
        _ => Check::Pass,
    }
}

fn perfect_adjoints(l: &LatticeModule, form: &BlockForm) -> Result<Vec<GradedOp>> {
    adjoint_family(&l.module, form)
}

/// The sublattice `M_I` with its splitting test.
#[derive(Clone, Debug)]
pub struct LatticeMI {
    /// Column basis of `M_I` at each weight, in lattice coordinates.
    pub basis: BTreeMap<Weight, Matrix>,
    pub split: Check,
}

/// Weights from the top down: decreasing height above an arbitrary base, ties
/// lexicographically decreasing. Sources of `F^{(n)}` come before targets.
fn top_down(rs: &RootSystem, weights: impl Iterator<Item = Weight>) -> Vec<Weight> {
    let mut keyed: Vec<(Rat, Weight)> = weights
        .map(|mu| {
            let h = rs.root_coords(&mu).into_iter().fold(Rat::zero(), |a, b| a + b);
            (h, mu)
        })
        .collect();
    keyed.sort_by(|a, b| b.cmp(a));
    keyed.into_iter().map(|(_, mu)| mu).collect()
}

/// The smallest sublattice stable under all `F_α^{(n)}` containing every
/// `M_μ` with `μ ∈ I`; it splits iff each weight's inclusion has unit
/// elementary divisors.
pub fn lattice_mi(l: &LatticeModule, upset: &UpSet) -> LatticeMI {
    let m = l.rational();
    let rs = m.root_system();
    let mut basis: BTreeMap<Weight, Matrix> = BTreeMap::new();
    let mut split = Check::Pass;
    for mu in top_down(rs, m.support().cloned()) {
        let d = m.dim(&mu);
        let red = if rs.upset_contains(upset, &mu) {
            ColumnReduction { basis: Matrix::identity(d), divisors: vec![0; d] }
        } else {
            let mut cols = Vec::new();
            for (a, op) in m.ops().iter().enumerate() {
                let alpha = rs.simple_root(a);
                let mut src = &mu + &alpha;
                let mut n = 1;
                while m.dims().contains_key(&src) {
                    if let Some(b) = basis.get(&src).filter(|b| b.cols() > 0) {
                        let img = divided_block(&m, op, &src, n).mul(b, Q);
                        cols.extend((0..img.cols()).map(|j| img.col(j)));
                    }
                    src = &src + &alpha;
                    n += 1;
                }
            }
            column_reduce(&Matrix::from_cols(d, &cols), l.p)
        };
        if split.passed() {
            if let Some(v) = red.divisors.iter().find(|&&v| v != 0) {
                split = Check::fail(format!(
                    "M_I -> M does not split at weight {mu} for I = {upset} (elementary divisor p^{v})"
                ));
            }
        }
        basis.insert(mu, red.basis);
    }
    LatticeMI { basis, split }
}

fn principal_upsets(m: &GradedModule) -> Vec<UpSet> {
    top_down(m.root_system(), m.support().cloned()).into_iter().map(UpSet::principal).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PadicHrReport {
    pub symmetric: Check,
    /// Every Gram block has p-integral entries and unit determinant.
    pub unimodular: Check,
    pub commutators: Check,
    /// The restriction to each checked `M_I` has nonzero determinant.
    pub faithful: Check,
    /// `M_I = M ∩ (M ⊗ Q)_I` on each checked split `I`.
    pub rational_closure: Check,
    pub checked_upsets: Vec<UpSet>,
    pub overall: bool,
}

fn check_unimodular(l: &LatticeModule, form: &BlockForm) -> Check {
    for (mu, g) in form.blocks.iter().rev() {
        if !g.entries().all(|x| is_p_integral(x, l.p)) {
            return Check::fail(format!("Gram block at weight {mu} is not p-integral"));
        }
        match valuation(&g.det(Q), l.p) {
            None => return Check::fail(format!("Gram block at weight {mu} is singular")),
            Some(0) => {}
            Some(v) => return Check::fail(format!("unimodularity fails at weight {mu} (valuation {v})")),
        }
    }
    Check::Pass
}

/// Checks a p-adic HR-form: symmetry, unimodularity, the commutator
/// identities, faithfulness on `M_I` for principal up-sets of the support and
/// for `upsets`, and `M_I = M ∩ (M ⊗ Q)_I` on those `I`.
pub fn verify_padic_hr(l: &LatticeModule, form: &BlockForm, upsets: &[UpSet]) -> Result<PadicHrReport> {
    l.module.check_form(form)?;
    let m = l.rational();
    let symmetric = check_symmetric(form);
    let unimodular = check_unimodular(l, form);
    let singular = form.blocks.iter().find(|(_, g)| g.det(Q).is_zero()).map(|(mu, _)| mu.clone());
    let commutators = match &singular {
        Some(mu) => Check::Skipped { reason: format!("adjoint undefined: Gram block at {mu} is singular") },
        None => {
            let e = (0..m.root_system().rank()).map(|a| adjoint_op(&m, form, a)).collect::<Result<Vec<_>>>()?;
            check_commutators(&m, &e)
        }
    };

    let mut checked = principal_upsets(&m);
    for u in upsets {
        if !checked.contains(u) {
            checked.push(u.clone());
        }
    }
    let mut faithful = Check::Pass;
    let mut rational_closure = Check::Pass;
    for upset in &checked {
        let mi = lattice_mi(l, upset);
        if faithful.passed() {
            for (mu, b) in &mi.basis {
                if b.cols() > 0 && b.gram_of(form.block(mu), b, Q).det(Q).is_zero() {
                    faithful = Check::fail(format!("restriction to M_I for I = {upset} is not faithful at weight {mu}"));
                    break;
                }
            }
        }
        if rational_closure.passed() && mi.split.passed() {
            let rational = submodule_mi(&m, upset)?;
            for (mu, b) in &mi.basis {
                let r = rational.basis.get(mu).cloned().unwrap_or_else(|| Matrix::zeros(m.dim(mu), 0));
                let sat = if r.cols() == 0 { r } else { saturate(&r, l.p) };
                if !same_lattice(b, &sat, l.p) {
                    rational_closure =
                        Check::fail(format!("M_I differs from M ∩ (M ⊗ Q)_I at weight {mu} for I = {upset}"));
                    break;
                }
            }
        }
    }
    let overall = [&symmetric, &unimodular, &commutators, &faithful, &rational_closure].iter().all(|c| c.passed());
    Ok(PadicHrReport { symmetric, unimodular, commutators, faithful, rational_closure, checked_upsets: checked, overall })
}

/// The lattice generated by a highest weight vector of `V(λ)` under all
/// `f_α^{(n)}`, with the contravariant form normalized by `(v, v) = 1`.
///
/// Generators at each weight are listed from the top down, so the first
/// generator is `f^{(l)}v` whenever it reaches that weight directly.
pub fn weyl_lattice(rs: &RootSystem, lambda: &Weight, p: u64) -> Result<(LatticeModule, BlockForm)> {
    if !lambda.is_dominant() {
        return Err(HrError::NonDominant(lambda.clone()));
    }
    Ring::p_local(p)?;
    let s = standard_module(rs, Ring::Rational, lambda, StandardOptions::default())?;
    let m = &s.module;
    let mut order: Vec<(u32, Weight)> =
        m.support().map(|mu| (rs.height_between(lambda, mu).expect("weight below λ"), mu.clone())).collect();
    order.sort();
    let mut basis: BTreeMap<Weight, Matrix> = BTreeMap::new();
    for (h, mu) in &order {
        let d = m.dim(mu);
        if *h == 0 {
            basis.insert(mu.clone(), Matrix::identity(d));
            continue;
        }
        let mut cols = Vec::new();
        for (_, src) in order.iter().filter(|(hs, _)| hs < h) {
            // src − μ must be a multiple nα of a single simple root
            let Some(counts) = rs.positive_root_combination(&(src - mu)) else { continue };
            let nonzero: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
            if let [a] = nonzero[..] {
                let img = divided_block(m, m.op(a), src, counts[a]).mul(&basis[src], Q);
                cols.extend((0..img.cols()).map(|j| img.col(j)));
            }
        }
        let red = column_reduce(&Matrix::from_cols(d, &cols), p);
        if red.basis.cols() != d {
            return Err(HrError::DimensionMismatch(format!("divided powers do not span weight {mu}")));
        }
        basis.insert(mu.clone(), red.basis);
    }
    let form = m.transform_form(&s.form, &basis);
    let lattice = LatticeModule::from_ambient(m, basis, p)?;
    Ok((lattice, form))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationStep {
    pub weight: Weight,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylFiltrationReport {
    /// The weight enumeration defining the chain of up-sets.
    pub order: Vec<Weight>,
    /// Nonzero steps `(μ_j, multiplicity)` of the chain, in order.
    pub steps: Vec<FiltrationStep>,
    /// First non-split or non-matching step, if any.
    pub failure: Option<String>,
}

impl WeylFiltrationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn multiplicities(&self) -> Vec<(Weight, usize)> {
        self.steps.iter().map(|s| (s.weight.clone(), s.multiplicity)).collect()
    }
}

/// Support weights with larger weights first: repeatedly takes the
/// lexicographically largest weight not below any remaining one.
pub fn filtration_order(rs: &RootSystem, support: &[Weight]) -> Vec<Weight> {
    let mut left: BTreeSet<Weight> = support.iter().cloned().collect();
    let mut out = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let pick = left
            .iter()
            .rev()
            .find(|mu| !left.iter().any(|nu| rs.lt(mu, nu)))
            .cloned()
            .expect("finite poset has a maximal element");
        left.remove(&pick);
        out.push(pick);
    }
    out
}

/// Walks the chain `M[I_1] ⊂ M[I_2] ⊂ …` with `I_j` generated by the first
/// `j` weights of [`filtration_order`], requiring split inclusions and
/// subquotient characters that are multiples of `char Δ(μ_j)`.
pub fn weyl_filtration(l: &LatticeModule) -> Result<WeylFiltrationReport> {
    let m = &l.module;
    let rs = m.root_system();
    let support: Vec<Weight> = m.support().cloned().collect();
    let order = filtration_order(rs, &support);
    let mut steps = Vec::new();
    let mut prev: BTreeMap<Weight, usize> = BTreeMap::new();
    let mut failure = None;
    for j in 0..order.len() {
        let mu = &order[j];
        let upset = UpSet::new(order[..=j].to_vec());
        let mi = lattice_mi(l, &upset);
        if let Check::Fail { witness } = mi.split {
            failure = Some(witness);
            break;
        }
        let dims: BTreeMap<Weight, usize> = mi.basis.iter().map(|(nu, b)| (nu.clone(), b.cols())).collect();
        let quotient: BTreeMap<Weight, usize> = dims
            .iter()
            .map(|(nu, &d)| (nu.clone(), d - prev.get(nu).copied().unwrap_or(0)))
            .filter(|(_, d)| *d > 0)
            .collect();
        let mult = quotient.get(mu).copied().unwrap_or(0);
        let expected: BTreeMap<Weight, usize> = if mult == 0 {
            BTreeMap::new()
        } else if !mu.is_dominant() {
            failure = Some(format!("subquotient at step {} has non-dominant top weight {mu}", j + 1));
            break;
        } else {
            freudenthal_character(rs, mu)?.multiplicities.into_iter().map(|(nu, c)| (nu, c * mult)).collect()
        };
        if quotient != expected {
            failure = Some(format!(
                "subquotient at step {} (weight {mu}) is not {mult} copies of the Weyl module",
                j + 1
            ));
            break;
        }
        if mult > 0 {
            steps.push(FiltrationStep { weight: mu.clone(), multiplicity: mult });
        }
        prev = dims;
    }
    Ok(WeylFiltrationReport { order, steps, failure })
}

/// The dual lattice `Hom(M, Z_(p))` with the contravariant structure; needs a perfect form.
pub fn lattice_dual(l: &LatticeModule, form: &BlockForm) -> Result<(LatticeModule, BlockForm)> {
    adjoint_family(&l.module, form)?;
    let (dual, dual_form) = contravariant_dual(&l.module, Some(form))?;
    let basis = l
        .basis
        .iter()
        .map(|(mu, b)| (mu.clone(), b.inverse(Q).expect("basis").transpose()))
        .collect();
    Ok((LatticeModule::new(dual, Some(basis))?, dual_form.expect("form given")))
}

/// The form as a map `M → dM` commutes with every `F_α`.
fn check_self_dual(l: &LatticeModule, form: &BlockForm, dual: &LatticeModule) -> Check {
    let m = &l.module;
    for a in 0..m.root_system().rank() {
        for mu in m.support() {
            let t = m.op(a).target(mu);
            if !m.dims().contains_key(&t) {
                continue;
            }
            let lhs = form.block(&t).mul(&m.block(a, mu), Q);
            let rhs = dual.module.block(a, mu).mul(form.block(mu), Q);
            if lhs != rhs {
                return Check::fail(format!("the form does not intertwine F_{} with its dual at weight {mu}", a + 1));
            }
        }
    }
    Check::Pass
}

#[derive(Clone, Debug, Serialize)]
pub struct TiltingVerdict {
    pub divided_powers: Check,
    pub splitting: Check,
    pub padic_hr: Option<PadicHrReport>,
    pub self_dual: Check,
    pub filtration: Option<WeylFiltrationReport>,
    pub dual_filtration: Option<WeylFiltrationReport>,
    pub overall: bool,
}

impl TiltingVerdict {
    /// The first failing check, as a witness string.
    pub fn first_failure(&self) -> Option<String> {
        let hr = self.padic_hr.as_ref();
        [
            Some(&self.divided_powers),
            Some(&self.splitting),
            hr.map(|r| &r.symmetric),
            hr.map(|r| &r.unimodular),
            hr.map(|r| &r.commutators),
            hr.map(|r| &r.faithful),
            hr.map(|r| &r.rational_closure),
            Some(&self.self_dual),
        ]
        .into_iter()
        .flatten()
        .find_map(|c| c.witness().map(str::to_string))
        .or_else(|| self.filtration.as_ref().and_then(|f| f.failure.clone()))
        .or_else(|| self.dual_filtration.as_ref().and_then(|f| f.failure.clone()))
    }
}

/// Decides whether `(M, form)` satisfies the tilting criterion: divided-power
/// integrality, split `M_I` on principal up-sets and the filtration chain, a
/// p-adic HR-form, self-duality through the form, and Weyl filtrations of
/// both `M` and `dM`. Stops at the first failing stage.
pub fn verify_tilting(l: &LatticeModule, form: &BlockForm) -> Result<TiltingVerdict> {
    l.module.check_form(form)?;
    let skipped = |why: &str| Check::Skipped { reason: why.to_string() };
    let mut verdict = TiltingVerdict {
        divided_powers: check_divided_powers(l, Some(form)),
        splitting: skipped("divided powers failed"),
        padic_hr: None,
        self_dual: skipped("divided powers failed"),
        filtration: None,
        dual_filtration: None,
        overall: false,
    };
    if !verdict.divided_powers.passed() {
        return Ok(verdict);
    }

    let support: Vec<Weight> = l.module.support().cloned().collect();
    let order = filtration_order(l.root_system(), &support);
    let mut upsets = principal_upsets(&l.module);
    upsets.extend((1..=order.len()).map(|j| UpSet::new(order[..j].to_vec())));
    verdict.splitting = upsets
        .iter()
        .map(|u| lattice_mi(l, u).split)
        .find(|c| !c.passed())
        .unwrap_or(Check::Pass);
    if !verdict.splitting.passed() {
        verdict.self_dual = skipped("splitting failed");
        return Ok(verdict);
    }

    let hr = verify_padic_hr(l, form, &[])?;
    let hr_ok = hr.overall;
    verdict.padic_hr = Some(hr);
    if !hr_ok {
        verdict.self_dual = skipped("no p-adic HR-form");
        return Ok(verdict);
    }

    let (dual, _) = lattice_dual(l, form)?;
    verdict.self_dual = check_self_dual(l, form, &dual);
    let filtration = weyl_filtration(l)?;
    let dual_filtration = weyl_filtration(&dual)?;
    verdict.overall = verdict.self_dual.passed() && filtration.passed() && dual_filtration.passed();
    verdict.filtration = Some(filtration);
    verdict.dual_filtration = Some(dual_filtration);
    Ok(verdict)
}
