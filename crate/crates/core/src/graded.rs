//! X-graded free modules with lowering operators `F_α`, block-diagonal
//! bilinear forms, F-stable closures and contravariant duals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{HrError, Result};
use crate::linalg::Matrix;
use crate::roots::{RootSystem, UpSet, Weight};
use crate::scalar::{rat, Field, Rat, Ring};

/// A vector with one coordinate block per weight. Missing weights are zero.
pub type GradedVector = BTreeMap<Weight, Vec<Rat>>;

/// A homogeneous linear map of fixed degree. The block at `μ` maps the
/// weight space `μ` to the weight space `μ + degree`; missing blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOp {
    pub degree: Weight,
    pub blocks: BTreeMap<Weight, Matrix>,
}

impl GradedOp {
    pub fn zero(degree: Weight) -> Self {
        GradedOp { degree, blocks: BTreeMap::new() }
    }

    /// Scalar multiple of the identity, `c(μ)·id` on each weight space of `dims`.
    pub fn diagonal(dims: &BTreeMap<Weight, usize>, f: Field, c: impl Fn(&Weight) -> Rat) -> Self {
        let rank = dims.keys().next().map_or(0, Weight::rank);
        let blocks = dims
            .iter()
            .map(|(mu, &d)| (mu.clone(), Matrix::identity(d).scale(&c(mu), f)))
            .collect();
        GradedOp { degree: Weight::zero(rank), blocks }
    }

    pub fn block(&self, mu: &Weight) -> Option<&Matrix> {
        self.blocks.get(mu)
    }

    pub fn target(&self, mu: &Weight) -> Weight {
        mu + &self.degree
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedOp, f: Field) -> GradedOp {
        let mut blocks = BTreeMap::new();
        for (mu, b) in &other.blocks {
            let mid = other.target(mu);
            if let Some(a) = self.blocks.get(&mid) {
                let prod = a.mul(b, f);
                if !prod.is_zero() {
                    blocks.insert(mu.clone(), prod);
                }
            }
        }
        GradedOp { degree: &self.degree + &other.degree, blocks }
    }

    fn combine(&self, other: &GradedOp, f: Field, sign: i64) -> GradedOp {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut blocks = self.blocks.clone();
        for (mu, b) in &other.blocks {
            let b = b.scale(&rat(sign), f);
            let sum = match blocks.get(mu) {
                Some(a) => a.add(&b, f),
                None => b,
            };
            blocks.insert(mu.clone(), sum);
        }
        blocks.retain(|_, m| !m.is_zero());
        GradedOp { degree: self.degree.clone(), blocks }
    }

    pub fn add(&self, other: &GradedOp, f: Field) -> GradedOp {
        self.combine(other, f, 1)
    }

    pub fn sub(&self, other: &GradedOp, f: Field) -> GradedOp {
        self.combine(other, f, -1)
    }

    pub fn scale(&self, c: &Rat, f: Field) -> GradedOp {
        let mut blocks: BTreeMap<_, _> =
            self.blocks.iter().map(|(mu, b)| (mu.clone(), b.scale(c, f))).collect();
        blocks.retain(|_, m: &mut Matrix| !m.is_zero());
        GradedOp { degree: self.degree.clone(), blocks }
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &GradedOp, f: Field) -> GradedOp {
        self.compose(other, f).sub(&other.compose(self, f), f)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// First weight at which the operator is nonzero.
    pub fn first_nonzero(&self) -> Option<&Weight> {
        self.blocks.iter().find(|(_, m)| !m.is_zero()).map(|(mu, _)| mu)
    }

    pub fn apply(&self, v: &GradedVector, f: Field) -> GradedVector {
        let mut out: GradedVector = BTreeMap::new();
        for (mu, x) in v {
            if let Some(b) = self.blocks.get(mu) {
                let y = b.mul_vec(x, f);
                let t = self.target(mu);
                match out.get_mut(&t) {
                    Some(acc) => {
                        for (a, b) in acc.iter_mut().zip(y) {
                            *a = f.add(a, &b);
                        }
                    }
                    None => {
                        out.insert(t, y);
                    }
                }
            }
        }
        out.retain(|_, x| x.iter().any(|c| !c.is_zero()));
        out
    }

    pub fn power(&self, n: u32, dims: &BTreeMap<Weight, usize>, f: Field) -> GradedOp {
        let mut acc = GradedOp::diagonal(dims, f, |_| rat(1));
        for _ in 0..n {
            acc = self.compose(&acc, f);
        }
        acc
    }
}

/// Symmetric Gram matrix per weight; distinct weight spaces are orthogonal
/// by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockForm {
    pub blocks: BTreeMap<Weight, Matrix>,
}

impl BlockForm {
    pub fn new(blocks: BTreeMap<Weight, Matrix>) -> Self {
        BlockForm { blocks }
    }

    pub fn block(&self, mu: &Weight) -> &Matrix {
        &self.blocks[mu]
    }

    pub fn scale(&self, c: &Rat, f: Field) -> BlockForm {
        BlockForm { blocks: self.blocks.iter().map(|(mu, g)| (mu.clone(), g.scale(c, f))).collect() }
    }

    pub fn pair(&self, x: &GradedVector, y: &GradedVector, f: Field) -> Rat {
        let mut s = Rat::zero();
        for (mu, a) in x {
            if let (Some(b), Some(g)) = (y.get(mu), self.blocks.get(mu)) {
                let gb = g.mul_vec(b, f);
                for (u, v) in a.iter().zip(&gb) {
                    s = f.add(&s, &f.mul(u, v));
                }
            }
        }
        s
    }

    pub fn direct_sum(&self, other: &BlockForm) -> BlockForm {
        let mut blocks = BTreeMap::new();
        let weights: BTreeSet<&Weight> = self.blocks.keys().chain(other.blocks.keys()).collect();
        for mu in weights {
            let b = match (self.blocks.get(mu), other.blocks.get(mu)) {
                (Some(a), Some(b)) => block_diag(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            blocks.insert(mu.clone(), b);
        }
        BlockForm { blocks }
    }
}

pub(crate) fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
        }
    }
    m
}

/// A finite-support X-graded free module with one lowering operator per simple root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    rs: RootSystem,
    ring: Ring,
    dims: BTreeMap<Weight, usize>,
    ops: Vec<GradedOp>,
}

impl GradedModule {
    /// Builds and validates a module. `ops[i]` holds blocks of `F_{α_i}`
    /// keyed by source weight.
    pub fn new(
        rs: RootSystem,
        ring: Ring,
        dims: BTreeMap<Weight, usize>,
        ops: Vec<BTreeMap<Weight, Matrix>>,
    ) -> Result<Self> {
        let ring = ring.validate()?;
        let f = ring.field();
        if ops.len() != rs.rank() {
            return Err(HrError::DimensionMismatch(format!(
                "{} operators given for rank {}",
                ops.len(),
                rs.rank()
            )));
        }
        for (mu, &d) in &dims {
            if mu.rank() != rs.rank() {
                return Err(HrError::DimensionMismatch(format!("weight {mu} has wrong rank")));
            }
            if d == 0 {
                return Err(HrError::DimensionMismatch(format!("weight {mu} has dimension 0")));
            }
        }
        let mut graded = Vec::with_capacity(ops.len());
        for (i, blocks) in ops.into_iter().enumerate() {
            let alpha = rs.simple_root(i);
            let mut clean = BTreeMap::new();
            for (mu, b) in blocks {
                let target = &mu - &alpha;
                let src = dims.get(&mu).copied();
                let dst = dims.get(&target).copied();
                let b = reduce_checked(&b, f)?;
                match (src, dst) {
                    (Some(s), Some(t)) if b.shape() == (t, s) => {
                        if !b.is_zero() {
                            clean.insert(mu, b);
                        }
                    }
                    (Some(s), Some(t)) => {
                        return Err(HrError::DimensionMismatch(format!(
                            "F_{} block at {mu} is {}x{}, expected {t}x{s}",
                            i + 1,
                            b.rows(),
                            b.cols()
                        )))
                    }
                    _ if b.is_zero() => {}
                    _ => {
                        return Err(HrError::DimensionMismatch(format!(
                            "F_{} block from {mu} to {target} leaves the support",
                            i + 1
                        )))
                    }
                }
            }
            graded.push(GradedOp { degree: -&alpha, blocks: clean });
        }
        Ok(GradedModule { rs, ring, dims, ops: graded })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn dims(&self) -> &BTreeMap<Weight, usize> {
        &self.dims
    }

    pub fn dim(&self, mu: &Weight) -> usize {
        self.dims.get(mu).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.dims.keys()
    }

    /// `F_α` for a zero-based simple root index.
    pub fn op(&self, alpha: usize) -> &GradedOp {
        &self.ops[alpha]
    }

    pub fn ops(&self) -> &[GradedOp] {
        &self.ops
    }

    /// Block of `F_α` at source weight `μ`, zero-filled when absent.
    pub fn block(&self, alpha: usize, mu: &Weight) -> Matrix {
        let target = &self.ops[alpha].degree + mu;
        match self.ops[alpha].block(mu) {
            Some(b) => b.clone(),
            None => Matrix::zeros(self.dim(&target), self.dim(mu)),
        }
    }

    pub fn character(&self) -> BTreeMap<Weight, usize> {
        self.dims.clone()
    }

    /// The same data regarded over another ring (e.g. a lattice viewed over its fraction field).
    pub fn with_ring(&self, ring: Ring) -> Result<GradedModule> {
        let ops = self.ops.iter().map(|o| o.blocks.clone()).collect();
        GradedModule::new(self.rs.clone(), ring, self.dims.clone(), ops)
    }

    pub fn zero_vector(&self) -> GradedVector {
        BTreeMap::new()
    }

    /// Unit vector `e_k` in the weight space `μ`.
    pub fn basis_vector(&self, mu: &Weight, k: usize) -> GradedVector {
        let mut v = vec![Rat::zero(); self.dim(mu)];
        v[k] = rat(1);
        BTreeMap::from([(mu.clone(), v)])
    }

    /// `F_α(v)`.
    pub fn apply_op(&self, alpha: usize, v: &GradedVector) -> Result<GradedVector> {
        if alpha >= self.rs.rank() {
            return Err(HrError::IndexOutOfRange { index: alpha, rank: self.rs.rank() });
        }
        for (mu, x) in v {
            if x.len() != self.dim(mu) {
                return Err(HrError::DimensionMismatch(format!(
                    "vector has {} coordinates at {mu}, module has {}",
                    x.len(),
                    self.dim(mu)
                )));
            }
        }
        Ok(self.ops[alpha].apply(v, self.field()))
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        if self.rs != other.rs || self.ring != other.ring {
            return Err(HrError::DimensionMismatch("direct sum of incompatible modules".into()));
        }
        let mut dims = self.dims.clone();
        for (mu, d) in &other.dims {
            *dims.entry(mu.clone()).or_insert(0) += d;
        }
        let mut ops = Vec::new();
        for a in 0..self.rs.rank() {
            let mut blocks = BTreeMap::new();
            for mu in dims.keys() {
                let target = &self.ops[a].degree + mu;
                if !dims.contains_key(&target) {
                    continue;
                }
                let left = self.block_or_empty(a, mu);
                let right = other.block_or_empty(a, mu);
                blocks.insert(mu.clone(), block_diag(&left, &right));
            }
            ops.push(blocks);
        }
        GradedModule::new(self.rs.clone(), self.ring, dims, ops)
    }

    fn block_or_empty(&self, alpha: usize, mu: &Weight) -> Matrix {
        let target = &self.ops[alpha].degree + mu;
        self.ops[alpha]
            .block(mu)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(&target), self.dim(mu)))
    }

    /// New coordinates: the columns of `change[μ]` become the basis of `M_μ`.
    /// Weights absent from `change` keep their basis.
    pub fn change_basis(&self, change: &BTreeMap<Weight, Matrix>) -> Result<GradedModule> {
        let f = self.field();
        let mut inverses = BTreeMap::new();
        for (mu, p) in change {
            let inv = p
                .inverse(f)
                .ok_or_else(|| HrError::DimensionMismatch(format!("basis change at {mu} is singular")))?;
            inverses.insert(mu.clone(), inv);
        }
        let ops = self
            .ops
            .iter()
            .map(|op| {
                op.blocks
                    .iter()
                    .map(|(mu, b)| {
                        let t = op.target(mu);
                        let mut nb = b.clone();
                        if let Some(p) = change.get(mu) {
                            nb = nb.mul(p, f);
                        }
                        if let Some(pi) = inverses.get(&t) {
                            nb = pi.mul(&nb, f);
                        }
                        (mu.clone(), nb)
                    })
                    .collect()
            })
            .collect();
        GradedModule::new(self.rs.clone(), self.ring, self.dims.clone(), ops)
    }

    /// The module structure on an F-stable subspace, in the coordinates of its basis.
    pub fn restrict(&self, sub: &Subspace) -> Result<GradedModule> {
        let f = self.field();
        let dims: BTreeMap<Weight, usize> = sub
            .basis
            .iter()
            .filter(|(_, b)| b.cols() > 0)
            .map(|(mu, b)| (mu.clone(), b.cols()))
            .collect();
        let mut ops = Vec::new();
        for (a, op) in self.ops.iter().enumerate() {
            let mut blocks = BTreeMap::new();
            for mu in dims.keys() {
                let src = &sub.basis[mu];
                let t = op.target(mu);
                let image = self.block(a, mu).mul(src, f);
                if image.is_zero() {
                    continue;
                }
                let dst = sub.basis.get(&t).filter(|b| b.cols() > 0).ok_or_else(|| {
                    HrError::DimensionMismatch(format!("subspace is not F-stable at {mu}"))
                })?;
                let coords = dst.solve(&image, f).ok_or_else(|| {
                    HrError::DimensionMismatch(format!("subspace is not F-stable at {mu}"))
                })?;
                blocks.insert(mu.clone(), coords);
            }
            ops.push(blocks);
        }
        GradedModule::new(self.rs.clone(), self.ring, dims, ops)
    }

    /// Checks that a form has one square block per support weight.
    pub fn check_form(&self, form: &BlockForm) -> Result<()> {
        for (mu, &d) in &self.dims {
            match form.blocks.get(mu) {
                Some(g) if g.shape() == (d, d) => {}
                Some(g) => {
                    return Err(HrError::DimensionMismatch(format!(
                        "Gram block at {mu} is {}x{}, expected {d}x{d}",
                        g.rows(),
                        g.cols()
                    )))
                }
                None => return Err(HrError::DimensionMismatch(format!("no Gram block at {mu}"))),
            }
        }
        if let Some(mu) = form.blocks.keys().find(|mu| !self.dims.contains_key(*mu)) {
            return Err(HrError::DimensionMismatch(format!("Gram block at {mu} outside the support")));
        }
        Ok(())
    }

    /// Gram matrices in the basis change `change` (columns are new basis vectors).
    pub fn transform_form(&self, form: &BlockForm, change: &BTreeMap<Weight, Matrix>) -> BlockForm {
        let f = self.field();
        BlockForm {
            blocks: form
                .blocks
                .iter()
                .map(|(mu, g)| match change.get(mu) {
                    Some(p) => (mu.clone(), p.gram_of(g, p, f)),
                    None => (mu.clone(), g.clone()),
                })
                .collect(),
        }
    }

    /// Longest run of consecutive support weights along `μ, μ−α, μ−2α, …`.
    pub fn longest_string(&self, alpha: usize) -> u32 {
        let a = self.rs.simple_root(alpha);
        let mut best = 0;
        for mu in self.dims.keys() {
            if self.dims.contains_key(&(mu + &a)) {
                continue;
            }
            let mut len = 0;
            let mut cur = mu.clone();
            while self.dims.contains_key(&cur) {
                len += 1;
                cur = &cur - &a;
            }
            best = best.max(len);
        }
        best
    }
}

fn reduce_checked(m: &Matrix, f: Field) -> Result<Matrix> {
    if f == Field::Rational {
        return Ok(m.clone());
    }
    let rows = m
        .to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| f.try_reduce(x).ok_or_else(|| HrError::Format("entry not defined in prime field".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows_shaped(m.rows(), m.cols(), rows))
}

/// A graded subspace, one basis matrix (columns) per weight.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Subspace {
    pub basis: BTreeMap<Weight, Matrix>,
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace::default()
    }

    pub fn full(m: &GradedModule) -> Self {
        Subspace { basis: m.dims.iter().map(|(mu, &d)| (mu.clone(), Matrix::identity(d))).collect() }
    }

    pub fn dim_at(&self, mu: &Weight) -> usize {
        self.basis.get(mu).map_or(0, Matrix::cols)
    }

    pub fn dims(&self) -> BTreeMap<Weight, usize> {
        self.basis
            .iter()
            .filter(|(_, b)| b.cols() > 0)
            .map(|(mu, b)| (mu.clone(), b.cols()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Matrix::cols).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// `self ⊆ other` as subspaces of the same module.
    pub fn is_contained_in(&self, other: &Subspace, f: Field) -> bool {
        self.basis.iter().all(|(mu, b)| {
            if b.cols() == 0 {
                return true;
            }
            match other.basis.get(mu) {
                Some(o) => o.solve(b, f).is_some(),
                None => false,
            }
        })
    }

    pub fn same_as(&self, other: &Subspace, f: Field) -> bool {
        self.is_contained_in(other, f) && other.is_contained_in(self, f)
    }
}

/// Keeps an independent subset of `cols` spanning the same space.
fn independent_columns(rows: usize, cols: Vec<Vec<Rat>>, f: Field) -> Matrix {
    let m = Matrix::from_cols(rows, &cols);
    let piv = m.pivot_columns(f);
    m.select_cols(&piv)
}

/// The smallest F-stable subspace containing `seed`.
pub fn f_closure(m: &GradedModule, seed: &[GradedVector]) -> Result<Subspace> {
    let f = m.field();
    let mut gens: BTreeMap<Weight, Vec<Vec<Rat>>> = BTreeMap::new();
    for v in seed {
        for (mu, x) in v {
            if x.len() != m.dim(mu) {
                return Err(HrError::DimensionMismatch(format!("seed vector has wrong size at {mu}")));
            }
            if x.iter().any(|c| !f.reduce(c.clone()).is_zero()) {
                gens.entry(mu.clone()).or_default().push(x.iter().map(|c| f.reduce(c.clone())).collect());
            }
        }
    }
    let mut basis: BTreeMap<Weight, Matrix> = BTreeMap::new();
    let mut pending: BTreeSet<Weight> = BTreeSet::new();
    for (mu, cols) in gens {
        let b = independent_columns(m.dim(&mu), cols, f);
        if b.cols() > 0 {
            pending.insert(mu.clone());
            basis.insert(mu, b);
        }
    }
    while let Some(mu) = pending.pop_last() {
        let b = basis[&mu].clone();
        for (a, op) in m.ops.iter().enumerate() {
            let t = op.target(&mu);
            let image = m.block(a, &mu).mul(&b, f);
            if image.is_zero() {
                continue;
            }
            let old = basis.get(&t).cloned().unwrap_or_else(|| Matrix::zeros(m.dim(&t), 0));
            let merged = old.hstack(&image);
            let nb = independent_columns(m.dim(&t), (0..merged.cols()).map(|j| merged.col(j)).collect(), f);
            if nb.cols() > old.cols() {
                basis.insert(t.clone(), nb);
                pending.insert(t);
            }
        }
    }
    Ok(Subspace { basis })
}

/// `M_I`: the F-closure of all weight spaces whose weight lies in `I`.
pub fn submodule_mi(m: &GradedModule, upset: &UpSet) -> Result<Subspace> {
    let mut seed = Vec::new();
    for (mu, &d) in &m.dims {
        if m.rs.upset_contains(upset, mu) {
            for k in 0..d {
                seed.push(m.basis_vector(mu, k));
            }
        }
    }
    f_closure(m, &seed)
}

/// Raising operator adjoint to `F_α`: `E_α[μ] = G[μ+α]⁻¹ · F_α[μ+α]ᵀ · G[μ]`.
pub fn adjoint_op(m: &GradedModule, form: &BlockForm, alpha: usize) -> Result<GradedOp> {
    let f = m.field();
    let a = m.rs.simple_root(alpha);
    let mut blocks = BTreeMap::new();
    for mu in m.dims.keys() {
        let up = mu + &a;
        if !m.dims.contains_key(&up) {
            continue;
        }
        let fb = m.block(alpha, &up);
        if fb.is_zero() {
            continue;
        }
        let g_up = form.block(&up);
        let g_inv = g_up.inverse(f).ok_or_else(|| HrError::SingularGram(up.clone()))?;
        let e = g_inv.mul(&fb.transpose(), f).mul(form.block(mu), f);
        if !e.is_zero() {
            blocks.insert(mu.clone(), e);
        }
    }
    Ok(GradedOp { degree: a, blocks })
}

/// The contravariant dual `dM` in the dual basis, together with the dual form.
///
/// With a form, the dual's `F_α` at `μ` is the transpose of the raising block
/// `E_α[μ−α]` and the dual Gram blocks are the inverses `G[μ]⁻¹`. Without a form
/// the standard basis pairing is used, which makes `dM` equal to `M` in these
/// coordinates; that choice depends on the basis.
pub fn contravariant_dual(
    m: &GradedModule,
    form: Option<&BlockForm>,
) -> Result<(GradedModule, Option<BlockForm>)> {
    let Some(form) = form else {
        return Ok((m.clone(), None));
    };
    m.check_form(form)?;
    let f = m.field();
    let mut ops = Vec::new();
    for a in 0..m.rs.rank() {
        let e = adjoint_op(m, form, a)?;
        let alpha = m.rs.simple_root(a);
        let blocks = e
            .blocks
            .iter()
            .map(|(low, b)| (low + &alpha, b.transpose()))
            .collect::<BTreeMap<_, _>>();
        ops.push(blocks);
    }
    let mut dual_form = BTreeMap::new();
    for (mu, g) in &form.blocks {
        let inv = g.inverse(f).ok_or_else(|| HrError::SingularGram(mu.clone()))?;
        dual_form.insert(mu.clone(), inv);
    }
    let dual = GradedModule::new(m.rs.clone(), m.ring, m.dims.clone(), ops)?;
    Ok((dual, Some(BlockForm::new(dual_form))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: i64) -> Weight {
        Weight(vec![x])
    }

    /// sl2 string with weights n, n-2, ..., -n and F acting by 1's (path basis of V(n)).
    fn sl2_string(n: i64) -> GradedModule {
        let dims: BTreeMap<_, _> = (0..=n).map(|k| (w(n - 2 * k), 1)).collect();
        let blocks: BTreeMap<_, _> =
            (0..n).map(|k| (w(n - 2 * k), Matrix::from_ints(&[&[1]]))).collect();
        GradedModule::new(RootSystem::a1(), Ring::Rational, dims, vec![blocks]).unwrap()
    }

    #[test]
    fn apply_op_moves_down() {
        let m = sl2_string(3);
        let v = m.basis_vector(&w(3), 0);
        let out = m.apply_op(0, &v).unwrap();
        assert_eq!(out, m.basis_vector(&w(1), 0));
        assert!(m.apply_op(0, &m.zero_vector()).unwrap().is_empty());
        assert!(m.apply_op(0, &m.basis_vector(&w(-3), 0)).unwrap().is_empty());
    }

    #[test]
    fn apply_op_rejects_bad_vectors() {
        let m = sl2_string(3);
        let bad = BTreeMap::from([(w(3), vec![rat(1), rat(2)])]);
        assert!(matches!(m.apply_op(0, &bad), Err(HrError::DimensionMismatch(_))));
        assert!(matches!(m.apply_op(1, &bad), Err(HrError::IndexOutOfRange { .. })));
    }

    #[test]
    fn block_leaving_support_is_rejected() {
        let dims = BTreeMap::from([(w(1), 1)]);
        let ops = vec![BTreeMap::from([(w(1), Matrix::from_ints(&[&[1]]))])];
        assert!(GradedModule::new(RootSystem::a1(), Ring::Rational, dims, ops).is_err());
    }

    #[test]
    fn closure_examples() {
        let m = sl2_string(3);
        let all = f_closure(&m, &[m.basis_vector(&w(3), 0)]).unwrap();
        assert_eq!(all.total_dim(), 4);
        assert!(f_closure(&m, &[]).unwrap().is_zero());

        let sum = sl2_string(3).direct_sum(&sl2_string(1)).unwrap();
        let mut top1 = sum.zero_vector();
        top1.insert(w(1), vec![rat(0), rat(1)]);
        let small = f_closure(&sum, &[top1]).unwrap();
        assert_eq!(small.dims(), BTreeMap::from([(w(1), 1), (w(-1), 1)]));

        let mi = submodule_mi(&sum, &UpSet::principal(w(3))).unwrap();
        assert_eq!(mi.total_dim(), 4);
        assert_eq!(mi.dim_at(&w(1)), 1);
        assert!(submodule_mi(&m, &UpSet::principal(w(5))).unwrap().is_zero());
        assert_eq!(submodule_mi(&m, &UpSet::principal(w(3))).unwrap().total_dim(), 4);
    }

    #[test]
    fn dual_without_form_keeps_dims() {
        let m = sl2_string(3);
        let (d, none) = contravariant_dual(&m, None).unwrap();
        assert!(none.is_none());
        assert_eq!(d.character(), m.character());
    }
}
