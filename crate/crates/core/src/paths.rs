//! The path module `P(λ)`: words in simple roots, the operators `φ_α` and
//! `ε_α`, the symmetric form on paths, and the standard module
//! `V(λ) = P(λ)/rad`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{HrError, Result};
use crate::graded::{BlockForm, GradedModule};
use crate::linalg::Matrix;
use crate::roots::{RootSystem, Weight};
use crate::scalar::{Field, Rat, Ring};

/// A word `(α_{i_1}, …, α_{i_l})` of zero-based simple root indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SimpleRootPath(pub Vec<usize>);

impl fmt::Debug for SimpleRootPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("a{}", i + 1)).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl SimpleRootPath {
    pub fn empty() -> Self {
        SimpleRootPath(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of each simple root in the word.
    pub fn counts(&self, rank: usize) -> Vec<u32> {
        let mut c = vec![0; rank];
        for &i in &self.0 {
            c[i] += 1;
        }
        c
    }

    /// Sum of the roots in the word, as a weight.
    pub fn height(&self, rs: &RootSystem) -> Weight {
        self.0.iter().fold(Weight::zero(rs.rank()), |acc, &i| &acc + &rs.simple_root(i))
    }

    pub fn reversed(&self) -> Self {
        SimpleRootPath(self.0.iter().rev().copied().collect())
    }

    /// The word with the letter at zero-based position `i` removed.
    pub fn delete(&self, i: usize) -> Self {
        let mut w = self.0.clone();
        w.remove(i);
        SimpleRootPath(w)
    }

    pub fn prepend(&self, alpha: usize) -> Self {
        let mut w = Vec::with_capacity(self.0.len() + 1);
        w.push(alpha);
        w.extend_from_slice(&self.0);
        SimpleRootPath(w)
    }
}

/// Finite linear combination of paths with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathVector {
    pub terms: BTreeMap<SimpleRootPath, BigInt>,
}

impl PathVector {
    pub fn zero() -> Self {
        PathVector::default()
    }

    pub fn from_path(p: SimpleRootPath) -> Self {
        Self::term(p, BigInt::one())
    }

    pub fn term(p: SimpleRootPath, c: BigInt) -> Self {
        let mut v = PathVector::zero();
        v.add_term(p, c);
        v
    }

    pub fn add_term(&mut self, p: SimpleRootPath, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &PathVector) -> PathVector {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> PathVector {
        let mut out = PathVector::zero();
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &SimpleRootPath) -> BigInt {
        self.terms.get(p).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// All words whose letters sum to `λ − μ`, in lexicographic order.
pub fn enumerate_paths(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Vec<SimpleRootPath> {
    let Some(counts) = rs.positive_root_combination(&(lambda - mu)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut word = Vec::new();
    let mut left = counts;
    permutations(&mut left, &mut word, &mut out);
    out
}

fn permutations(left: &mut [u32], word: &mut Vec<usize>, out: &mut Vec<SimpleRootPath>) {
    if left.iter().all(|&c| c == 0) {
        out.push(SimpleRootPath(word.clone()));
        return;
    }
    for i in 0..left.len() {
        if left[i] == 0 {
            continue;
        }
        left[i] -= 1;
        word.push(i);
        permutations(left, word, out);
        word.pop();
        left[i] += 1;
    }
}

/// `φ_α`: prepends `α` to every path.
pub fn phi(alpha: usize, v: &PathVector) -> PathVector {
    PathVector { terms: v.terms.iter().map(|(p, c)| (p.prepend(alpha), c.clone())).collect() }
}

/// `ε_α(γ_1,…,γ_l) = Σ_{i: γ_i = α} ⟨λ − γ_{i+1} − ⋯ − γ_l, α∨⟩ γ^{(i)}`.
pub fn epsilon(rs: &RootSystem, lambda: &Weight, alpha: usize, v: &PathVector) -> PathVector {
    let mut out = PathVector::zero();
    for (path, c) in &v.terms {
        // pairing of λ − (suffix after position i) with α∨, scanned right to left
        let mut pairing = lambda.0[alpha];
        for i in (0..path.len()).rev() {
            if path.0[i] == alpha && pairing != 0 {
                out.add_term(path.delete(i), c * BigInt::from(pairing));
            }
            pairing -= rs.cartan()[alpha][path.0[i]];
        }
    }
    out
}

/// Memoized evaluator of the path form `(a, b)_{P(λ)}`.
pub struct PathForm<'a> {
    rs: &'a RootSystem,
    lambda: Weight,
    memo: HashMap<(SimpleRootPath, SimpleRootPath), BigInt>,
}

impl<'a> PathForm<'a> {
    pub fn new(rs: &'a RootSystem, lambda: &Weight) -> Self {
        PathForm { rs, lambda: lambda.clone(), memo: HashMap::new() }
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    /// `(a, b)`: zero for different heights, `(∅, ∅) = 1`, otherwise
    /// `Σ_{i: a_i = b_1} ⟨μ + a_1 + ⋯ + a_{i−1}, b_1∨⟩ (a^{(i)}, b^{(1)})`
    /// with `μ = λ − ht(b) + b_1`.
    pub fn entry(&mut self, a: &SimpleRootPath, b: &SimpleRootPath) -> BigInt {
        let rank = self.rs.rank();
        if a.len() != b.len() || a.counts(rank) != b.counts(rank) {
            return BigInt::zero();
        }
        self.entry_same_height(a, b)
    }

    fn entry_same_height(&mut self, a: &SimpleRootPath, b: &SimpleRootPath) -> BigInt {
        if b.is_empty() {
            return BigInt::one();
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let cartan = self.rs.cartan();
        let b1 = b.0[0];
        let rest = b.delete(0);
        // ⟨μ, b_1∨⟩ with μ = λ − ht(b_2 … b_l)
        let mut pairing = self.lambda.0[b1] - rest.0.iter().map(|&j| cartan[b1][j]).sum::<i64>();
        let mut total = BigInt::zero();
        for i in 0..a.len() {
            if a.0[i] == b1 && pairing != 0 {
                let sub = self.entry_same_height(&a.delete(i), &rest);
                total += sub * BigInt::from(pairing);
            }
            pairing += cartan[b1][a.0[i]];
        }
        self.memo.insert(key, total.clone());
        total
    }

    /// Gram matrix over a list of paths of equal height.
    pub fn block(&mut self, basis: &[SimpleRootPath]) -> Matrix {
        let n = basis.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = Rat::from_integer(self.entry(&basis[i], &basis[j]));
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
        g
    }
}

/// Single form entry `(a, b)_{P(λ)}`.
pub fn gram_entry(rs: &RootSystem, lambda: &Weight, a: &SimpleRootPath, b: &SimpleRootPath) -> BigInt {
    PathForm::new(rs, lambda).entry(a, b)
}

/// Gram matrix of `P(λ)_μ` in the lexicographic path basis.
pub fn gram_block(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Matrix {
    let basis = enumerate_paths(rs, lambda, mu);
    PathForm::new(rs, lambda).block(&basis)
}

/// `V(λ)` truncated at a depth, with the path words that represent its basis.
#[derive(Clone, Debug)]
pub struct StandardModule {
    pub lambda: Weight,
    pub depth: u32,
    pub module: GradedModule,
    pub form: BlockForm,
    /// Coset representatives: the basis of `V(λ)_μ` is the image of these paths.
    pub representatives: BTreeMap<Weight, Vec<SimpleRootPath>>,
}

/// Options for [`standard_module`].
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardOptions {
    /// Height bound on `λ − μ`; required unless `λ` is dominant.
    pub depth: Option<u32>,
    /// Compute Gram blocks of one level in parallel.
    pub parallel: bool,
}

/// Depth used when none is given: the height of `λ − w0(λ)` for dominant `λ`.
pub fn default_depth(rs: &RootSystem, lambda: &Weight) -> Result<u32> {
    if lambda.is_dominant() {
        Ok(rs.longest_depth(lambda))
    } else {
        Err(HrError::DepthRequired(format!("weight {lambda} is not dominant")))
    }
}

/// Weights `λ − Σ c_i α_i` with `Σ c_i = h`.
fn level_weights(rs: &RootSystem, lambda: &Weight, h: u32) -> Vec<Weight> {
    fn rec(rs: &RootSystem, i: usize, left: u32, acc: Weight, out: &mut Vec<Weight>) {
        if i + 1 == rs.rank() {
            out.push(&acc - &rs.simple_root(i).scale(left as i64));
            return;
        }
        for c in 0..=left {
            rec(rs, i + 1, left - c, &acc - &rs.simple_root(i).scale(c as i64), out);
        }
    }
    let mut out = Vec::new();
    rec(rs, 0, h, lambda.clone(), &mut out);
    out
}

struct WeightData {
    reps: Vec<SimpleRootPath>,
    gram: Matrix,
    gram_inv: Matrix,
}

fn weight_data(rs: &RootSystem, lambda: &Weight, mu: &Weight, f: Field) -> Option<WeightData> {
    let paths = enumerate_paths(rs, lambda, mu);
    if paths.is_empty() {
        return None;
    }
    let mut pf = PathForm::new(rs, lambda);
    let full = pf.block(&paths).reduce(f);
    let piv = full.pivot_columns(f);
    if piv.is_empty() {
        return None;
    }
    let gram = full.select_rows(&piv).select_cols(&piv);
    let gram_inv = gram.inverse(f).expect("principal block on pivot columns is invertible");
    Some(WeightData { reps: piv.iter().map(|&k| paths[k].clone()).collect(), gram, gram_inv })
}

/// Builds `V(λ)` over `ring` down to the given depth.
///
/// Exploration stops early once a whole level of weights vanishes, since
/// every weight space below is spanned by `F`-images from the level above.
pub fn standard_module(
    rs: &RootSystem,
    ring: Ring,
    lambda: &Weight,
    opts: StandardOptions,
) -> Result<StandardModule> {
    let ring = ring.validate()?;
    if lambda.rank() != rs.rank() {
        return Err(HrError::DimensionMismatch(format!("weight {lambda} has wrong rank")));
    }
    let depth = match opts.depth {
        Some(d) => d,
        None => default_depth(rs, lambda)?,
    };
    let f = ring.field();
    let mut data: BTreeMap<Weight, WeightData> = BTreeMap::new();
    for h in 0..=depth {
        let candidates: Vec<Weight> = level_weights(rs, lambda, h)
            .into_iter()
            .filter(|mu| h == 0 || (0..rs.rank()).any(|i| data.contains_key(&(mu + &rs.simple_root(i)))))
            .collect();
        let computed: Vec<(Weight, Option<WeightData>)> = if opts.parallel {
            candidates.into_par_iter().map(|mu| {
                let d = weight_data(rs, lambda, &mu, f);
                (mu, d)
            }).collect()
        } else {
            candidates.into_iter().map(|mu| {
                let d = weight_data(rs, lambda, &mu, f);
                (mu, d)
            }).collect()
        };
        let mut any = false;
        for (mu, d) in computed {
            if let Some(d) = d {
                data.insert(mu, d);
                any = true;
            }
        }
        if !any {
            break;
        }
    }

    let mut pf = PathForm::new(rs, lambda);
    let mut ops = vec![BTreeMap::new(); rs.rank()];
    for (mu, d) in &data {
        for (a, blocks) in ops.iter_mut().enumerate() {
            let t = mu - &rs.simple_root(a);
            let Some(td) = data.get(&t) else { continue };
            // class of (α, b) in the target basis: G'⁻¹ · ((r, (α, b)))_r
            let mut pairings = Matrix::zeros(td.reps.len(), d.reps.len());
            for (j, b) in d.reps.iter().enumerate() {
                let c = b.prepend(a);
                for (i, r) in td.reps.iter().enumerate() {
                    pairings[(i, j)] = f.reduce(Rat::from_integer(pf.entry(r, &c)));
                }
            }
            let block = td.gram_inv.mul(&pairings, f);
            if !block.is_zero() {
                blocks.insert(mu.clone(), block);
            }
        }
    }
    let dims = data.iter().map(|(mu, d)| (mu.clone(), d.reps.len())).collect();
    let form = BlockForm::new(data.iter().map(|(mu, d)| (mu.clone(), d.gram.clone())).collect());
    let representatives = data.into_iter().map(|(mu, d)| (mu, d.reps)).collect();
    let module = GradedModule::new(rs.clone(), ring, dims, ops)?;
    Ok(StandardModule { lambda: lambda.clone(), depth, module, form, representatives })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight(c.to_vec())
    }

    fn p(word: &[usize]) -> SimpleRootPath {
        SimpleRootPath(word.to_vec())
    }

    #[test]
    fn enumeration_examples() {
        let a1 = RootSystem::a1();
        assert_eq!(enumerate_paths(&a1, &w(&[3]), &w(&[-1])), vec![p(&[0, 0])]);
        let a2 = RootSystem::a2();
        assert_eq!(enumerate_paths(&a2, &w(&[1, 1]), &w(&[0, 0])), vec![p(&[0, 1]), p(&[1, 0])]);
        assert!(enumerate_paths(&a2, &w(&[1, 1]), &w(&[2, 2])).is_empty());
        assert_eq!(enumerate_paths(&a2, &w(&[1, 1]), &w(&[1, 1])), vec![p(&[])]);
    }

    #[test]
    fn path_word_operations() {
        let a2 = RootSystem::a2();
        let x = p(&[0, 1, 1]);
        assert_eq!(x.height(&a2), w(&[0, 3]));
        assert_eq!(x.reversed(), p(&[1, 1, 0]));
        assert_eq!(x.delete(0), p(&[1, 1]));
    }

    #[test]
    fn phi_examples() {
        let one = BigInt::one();
        assert_eq!(phi(0, &PathVector::from_path(p(&[]))), PathVector::from_path(p(&[0])));
        assert_eq!(phi(0, &PathVector::from_path(p(&[1]))), PathVector::from_path(p(&[0, 1])));
        let two = &one + &one;
        assert_eq!(phi(0, &PathVector::term(p(&[0]), two.clone())), PathVector::term(p(&[0, 0]), two));
    }

    #[test]
    fn epsilon_examples() {
        let a1 = RootSystem::a1();
        let l3 = w(&[3]);
        let e = epsilon(&a1, &l3, 0, &PathVector::from_path(p(&[0])));
        assert_eq!(e, PathVector::term(p(&[]), BigInt::from(3)));
        let e = epsilon(&a1, &l3, 0, &PathVector::from_path(p(&[0, 0])));
        assert_eq!(e, PathVector::term(p(&[0]), BigInt::from(4)));
        assert!(epsilon(&a1, &l3, 0, &PathVector::from_path(p(&[]))).is_zero());

        let a2 = RootSystem::a2();
        let e = epsilon(&a2, &w(&[1, 1]), 0, &PathVector::from_path(p(&[0, 1])));
        assert_eq!(e, PathVector::term(p(&[1]), BigInt::from(2)));
    }

    #[test]
    fn gram_examples() {
        let a1 = RootSystem::a1();
        let l3 = w(&[3]);
        let g = |l: usize| gram_entry(&a1, &l3, &p(&vec![0; l]), &p(&vec![0; l]));
        assert_eq!(g(1), BigInt::from(3));
        assert_eq!(g(2), BigInt::from(12));
        assert_eq!(g(3), BigInt::from(36));
        assert_eq!(g(4), BigInt::from(0));
        assert_eq!(gram_entry(&a1, &l3, &p(&[0]), &p(&[0, 0])), BigInt::from(0));

        let a2 = RootSystem::a2();
        let rho = w(&[1, 1]);
        assert_eq!(gram_entry(&a2, &rho, &p(&[0, 1]), &p(&[1, 0])), BigInt::from(1));
        assert_eq!(gram_entry(&a2, &rho, &p(&[0, 1]), &p(&[0, 1])), BigInt::from(2));
        assert_eq!(gram_block(&a2, &rho, &w(&[0, 0])), Matrix::from_ints(&[&[2, 1], &[1, 2]]));
        assert_eq!(gram_block(&a1, &l3, &w(&[1])), Matrix::from_ints(&[&[3]]));
        assert_eq!(gram_block(&a2, &rho, &w(&[5, 5])).shape(), (0, 0));
    }

    #[test]
    fn standard_module_examples() {
        let a1 = RootSystem::a1();
        let v3 = standard_module(&a1, Ring::Rational, &w(&[3]), StandardOptions { depth: Some(6), parallel: false })
            .unwrap();
        let dims: Vec<_> = v3.module.dims().iter().map(|(mu, d)| (mu.0[0], *d)).collect();
        assert_eq!(dims, vec![(-3, 1), (-1, 1), (1, 1), (3, 1)]);

        let a2 = RootSystem::a2();
        let adj = standard_module(&a2, Ring::Rational, &w(&[1, 1]), StandardOptions::default()).unwrap();
        assert_eq!(adj.module.total_dim(), 8);
        assert_eq!(adj.module.dim(&w(&[0, 0])), 2);

        let f3 = Ring::prime_field(3).unwrap();
        let adj3 = standard_module(&a2, f3, &w(&[1, 1]), StandardOptions::default()).unwrap();
        assert_eq!(adj3.module.total_dim(), 7);
        assert_eq!(adj3.module.dim(&w(&[0, 0])), 1);
    }

    #[test]
    fn non_dominant_needs_depth() {
        let a1 = RootSystem::a1();
        let err = standard_module(&a1, Ring::Rational, &w(&[-2]), StandardOptions::default());
        assert!(matches!(err, Err(HrError::DepthRequired(_))));
        let trunc = standard_module(&a1, Ring::Rational, &w(&[-2]), StandardOptions { depth: Some(3), parallel: false })
            .unwrap();
        assert_eq!(trunc.module.total_dim(), 4);
    }

    #[test]
    fn parallel_matches_sequential() {
        let a2 = RootSystem::a2();
        let lam = w(&[2, 1]);
        let s = standard_module(&a2, Ring::Rational, &lam, StandardOptions::default()).unwrap();
        let par = standard_module(&a2, Ring::Rational, &lam, StandardOptions { depth: None, parallel: true }).unwrap();
        assert_eq!(s.module, par.module);
        assert_eq!(s.form, par.form);
    }
}
