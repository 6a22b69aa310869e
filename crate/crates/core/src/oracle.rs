//! Reference computations kept independent of the path and form code:
//! positive roots by root strings, the Weyl dimension formula, Freudenthal's
//! multiplicity recursion, the sl2 Gram closed form, and a brute-force search
//! for a small sl2 tilting lattice.
//!
//! Only the scalar type and the root-system data are shared with the rest of
//! the crate; inverses, reflections and inner products are recomputed here.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{HrError, Result};
use crate::graded::{BlockForm, GradedModule, GradedOp};
use crate::hrform::adjoint_family;
use crate::io::WeightEntry;
use crate::linalg::Matrix;
use crate::padic::{column_reduce, lattice_contains, weyl_lattice, LatticeModule};
use crate::roots::{RootSystem, Weight};
use crate::scalar::{factorial, is_p_integral, rat, valuation, Field, Rat};

/// Weight multiplicities of a simple module in characteristic 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub highest_weight: Weight,
    #[serde(serialize_with = "serialize_multiplicities")]
    pub multiplicities: BTreeMap<Weight, usize>,
}

fn serialize_multiplicities<S: Serializer>(m: &BTreeMap<Weight, usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().rev().map(|(mu, &dim)| WeightEntry { coords: mu.clone(), dim }))
}

impl CharacterTable {
    pub fn dim(&self) -> usize {
        self.multiplicities.values().sum()
    }

    pub fn get(&self, mu: &Weight) -> usize {
        self.multiplicities.get(mu).copied().unwrap_or(0)
    }
}

fn cartan(rs: &RootSystem, i: usize, j: usize) -> i64 {
    rs.cartan()[i][j]
}

/// `d_i = (α_i, α_i)/2`, normalized so that the first root of each component has 1.
pub fn symmetrizer(rs: &RootSystem) -> Vec<Rat> {
    let n = rs.rank();
    let mut d: Vec<Option<Rat>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rat::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if i != j && cartan(rs, i, j) != 0 && d[j].is_none() {
                    // d_i a_ij = d_j a_ji
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * rat(cartan(rs, i, j)) / rat(cartan(rs, j, i)));
                    queue.push_back(j);
                }
            }
        }
    }
    d.into_iter().map(Option::unwrap).collect()
}

/// Positive roots in simple-root coordinates, by extending root strings.
pub fn positive_roots(rs: &RootSystem) -> Vec<Vec<i64>> {
    let n = rs.rank();
    let simple: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut roots: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier = simple;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..n {
                // ⟨β, α_i∨⟩ = Σ_j β_j a_ij
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan(rs, i, j)).sum();
                let mut down = 0;
                let mut cur = beta.clone();
                loop {
                    cur[i] -= 1;
                    if roots.contains(&cur) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                // the α_i-string through β is β − pα_i, …, β + qα_i with p − q = ⟨β, α_i∨⟩
                if down - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if roots.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        frontier = next;
    }
    roots.into_iter().collect()
}

/// `⟨μ, γ∨⟩` for a positive root `γ = Σ c_j α_j`: `Σ c_j d_j μ_j / d_γ`.
fn coroot_pairing(rs: &RootSystem, d: &[Rat], gamma: &[i64], mu: &Weight) -> Rat {
    let n = rs.rank();
    let mut d_gamma = Rat::zero();
    for i in 0..n {
        for j in 0..n {
            d_gamma += rat(gamma[i] * gamma[j] * cartan(rs, i, j)) * &d[i];
        }
    }
    d_gamma /= rat(2);
    let num = (0..n).fold(Rat::zero(), |acc, j| acc + rat(gamma[j] * mu.0[j]) * &d[j]);
    num / d_gamma
}

fn require_dominant(lambda: &Weight) -> Result<()> {
    if lambda.is_dominant() {
        Ok(())
    } else {
        Err(HrError::NonDominant(lambda.clone()))
    }
}

/// `Π_{γ>0} ⟨λ+ρ, γ∨⟩ / ⟨ρ, γ∨⟩`.
pub fn weyl_dim(rs: &RootSystem, lambda: &Weight) -> Result<BigInt> {
    require_dominant(lambda)?;
    let d = symmetrizer(rs);
    let rho = Weight(vec![1; rs.rank()]);
    let shifted = lambda + &rho;
    let mut prod = Rat::one();
    for gamma in positive_roots(rs) {
        prod *= coroot_pairing(rs, &d, &gamma, &shifted) / coroot_pairing(rs, &d, &gamma, &rho);
    }
    assert!(prod.is_integer(), "Weyl dimension is an integer");
    Ok(prod.to_integer())
}

/// Solves `A x = b` by elimination over the rationals.
fn solve_small(a: &[Vec<i64>], b: &[i64]) -> Vec<Rat> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| a[i].iter().map(|&x| rat(x)).chain(std::iter::once(rat(b[i]))).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("Cartan matrix is invertible");
        m.swap(c, p);
        let inv = Rat::one() / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let row_c = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&row_c) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

/// The W-invariant inner product, normalized by `(α_i, α_i) = 2 d_i`.
fn inner(rs: &RootSystem, d: &[Rat], x: &Weight, y: &Weight) -> Rat {
    let coords = solve_small(rs.cartan(), &x.0);
    (0..rs.rank()).fold(Rat::zero(), |acc, j| acc + &coords[j] * &d[j] * rat(y.0[j]))
}

fn dominant_of(rs: &RootSystem, mu: &Weight) -> Weight {
    let mut w = mu.clone();
    while let Some(i) = w.0.iter().position(|&x| x < 0) {
        let k = w.0[i];
        for j in 0..rs.rank() {
            w.0[j] -= k * cartan(rs, j, i);
        }
    }
    w
}

/// Multiplicities of `L(λ)` by Freudenthal's recursion on dominant weights,
/// extended to all weights by Weyl-group invariance.
pub fn freudenthal_character(rs: &RootSystem, lambda: &Weight) -> Result<CharacterTable> {
    require_dominant(lambda)?;
    let n = rs.rank();
    let d = symmetrizer(rs);
    let roots = positive_roots(rs);
    let root_weight = |gamma: &[i64]| -> Weight {
        Weight((0..n).map(|i| (0..n).map(|j| gamma[j] * cartan(rs, i, j)).sum()).collect())
    };
    let root_weights: Vec<Weight> = roots.iter().map(|g| root_weight(g)).collect();
    let rho = Weight(vec![1; n]);
    let top = inner(rs, &d, &(lambda + &rho), &(lambda + &rho));

    // breadth-first over λ − Σ c_i α_i, keeping weights with nonzero multiplicity
    let simple: Vec<Weight> = (0..n).map(|i| Weight((0..n).map(|k| cartan(rs, k, i)).collect())).collect();
    let mut mult: BTreeMap<Weight, usize> = BTreeMap::from([(lambda.clone(), 1)]);
    let mut level = vec![lambda.clone()];
    while !level.is_empty() {
        let mut next: BTreeSet<Weight> = BTreeSet::new();
        for mu in &level {
            for a in &simple {
                next.insert(mu - a);
            }
        }
        level = Vec::new();
        for mu in next {
            let dom = dominant_of(rs, &mu);
            let m = if dom != mu {
                mult.get(&dom).copied().unwrap_or(0)
            } else {
                let mut sum = Rat::zero();
                for g in &root_weights {
                    let mut k = 1;
                    loop {
                        let nu = &mu + &g.scale(k);
                        // weights above λ in the γ direction eventually leave the table
                        let Some(&c) = mult.get(&nu) else {
                            if inner(rs, &d, &(&nu - lambda), &rho).is_positive() {
                                break;
                            }
                            k += 1;
                            continue;
                        };
                        sum += rat(c as i64) * inner(rs, &d, &nu, g);
                        k += 1;
                    }
                }
                let denom = &top - inner(rs, &d, &(&mu + &rho), &(&mu + &rho));
                if denom.is_zero() {
                    0
                } else {
                    let m = rat(2) * sum / denom;
                    assert!(m.is_integer() && !m.is_negative(), "Freudenthal multiplicity");
                    usize::try_from(m.to_integer()).expect("small multiplicity")
                }
            };
            if m > 0 {
                mult.insert(mu.clone(), m);
                level.push(mu);
            }
        }
    }
    Ok(CharacterTable { highest_weight: lambda.clone(), multiplicities: mult })
}

/// `(f^l v, f^l v)` in `V(n)` for sl2: `l!·n(n−1)⋯(n−l+1)`.
pub fn sl2_gram(n: i64, l: u32) -> BigInt {
    let mut out = factorial(l as u64);
    for k in 0..l as i64 {
        out *= BigInt::from(n - k);
    }
    out
}

/// An sl2 lattice found by [`sl2_tilting_fixture`].
#[derive(Clone, Debug)]
pub struct TiltingFixture {
    pub lattice: LatticeModule,
    pub form: BlockForm,
    /// Scaling of the form on the second summand.
    pub scale: Rat,
    /// `[M : Δ(p) ⊕ Δ(p−2)]` as a power of `p`.
    pub index_exponent: usize,
}

/// All subspaces of `F_p^d`, as lists of vectors in reduced echelon form,
/// ordered by dimension and then lexicographically.
fn subspaces(d: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for k in 0..=d {
        // choose pivot columns, then fill free entries
        for pivots in combinations(d, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((pivots[r] + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let total = (p as usize).pow(free.len() as u32);
            for code in 0..total {
                let mut rows: Vec<Vec<u64>> = (0..k).map(|r| {
                    let mut v = vec![0; d];
                    v[pivots[r]] = 1;
                    v
                }).collect();
                let mut c = code;
                for &(r, col) in &free {
                    rows[r][col] = (c % p as usize) as u64;
                    c /= p as usize;
                }
                out.push(rows);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Blocks of `X^n/n!` from every support weight, for `n ≥ 1`.
fn divided_powers(m: &GradedModule, op: &GradedOp) -> Vec<(Weight, Weight, Matrix)> {
    let f = Field::Rational;
    let mut out = Vec::new();
    for mu in m.support() {
        let mut acc = Matrix::identity(m.dim(mu));
        let mut cur = mu.clone();
        let mut n = 0u64;
        while let Some(b) = op.block(&cur) {
            acc = b.mul(&acc, f);
            cur = op.target(&cur);
            n += 1;
            let div = acc.scale(&(Rat::one() / Rat::from_integer(factorial(n))), f);
            out.push((mu.clone(), cur.clone(), div));
        }
    }
    out
}

/// Searches lattices `Δ(p) ⊕ Δ(p−2) ⊂ M ⊂ p⁻¹(Δ(p) ⊕ Δ(p−2))` of index at
/// most `p^{p−1}` inside `L(p) ⊕ L(p−2)` for one stable under all `e^{(n)}`
/// and `f^{(n)}` on which `(·,·)_1 ⊕ b·(·,·)_2` is integral and unimodular,
/// for `b = ±m·p^k`, `1 ≤ m ≤ p²`, `|k| ≤ 2`. Candidates are visited by
/// increasing index, then graded subspace order, then `b`.
pub fn sl2_tilting_fixture(p: u64) -> Result<TiltingFixture> {
    if p < 3 || !crate::scalar::is_prime(p) {
        return Err(HrError::NotPrime(p));
    }
    let a1 = RootSystem::a1();
    let f = Field::Rational;
    let (big, g_big) = weyl_lattice(&a1, &Weight(vec![p as i64]), p)?;
    let (small, g_small) = weyl_lattice(&a1, &Weight(vec![p as i64 - 2]), p)?;
    let ambient = big.rational().direct_sum(&small.rational())?;
    let e = adjoint_family(&ambient, &g_big.direct_sum(&g_small))?;
    let moves: Vec<(Weight, Weight, Matrix)> = divided_powers(&ambient, ambient.op(0))
        .into_iter()
        .chain(divided_powers(&ambient, &e[0]))
        .collect();

    let weights: Vec<Weight> = ambient.dims().keys().rev().cloned().collect();
    let per_weight: Vec<Vec<Vec<Vec<u64>>>> = weights.iter().map(|mu| subspaces(ambient.dim(mu), p)).collect();
    let max_dim = (p - 1) as usize;

    let mut scales: Vec<Rat> = Vec::new();
    for k in [0i64, 1, -1, 2, -2] {
        for m in 1..=(p * p) as i64 {
            for s in [1, -1] {
                let pk = if k >= 0 { rat((p as i64).pow(k as u32)) } else { Rat::one() / rat((p as i64).pow((-k) as u32)) };
                let b = rat(s * m) * pk;
                if !scales.contains(&b) {
                    scales.push(b);
                }
            }
        }
    }

    for total in 1..=max_dim {
        let mut choice = vec![0usize; weights.len()];
        let mut found = None;
        enumerate_graded(&per_weight, total, 0, &mut choice, &mut |choice| {
            let mut basis = BTreeMap::new();
            for (i, mu) in weights.iter().enumerate() {
                let dim = ambient.dim(mu);
                let mut cols: Vec<Vec<Rat>> = (0..dim).map(|j| Matrix::identity(dim).col(j)).collect();
                let p_inv = Rat::one() / rat(p as i64);
                for v in &per_weight[i][choice[i]] {
                    cols.push(v.iter().map(|&x| rat(x as i64) * &p_inv).collect());
                }
                basis.insert(mu.clone(), column_reduce(&Matrix::from_cols(dim, &cols), p).basis);
            }
            let stable = moves.iter().all(|(src, dst, op)| {
                let img = op.mul(&basis[src], f);
                lattice_contains(&basis[dst], &img, p)
            });
            if !stable {
                return false;
            }
            for b in &scales {
                let form = g_big.direct_sum(&g_small.scale(b, f));
                let lattice_form = ambient.transform_form(&form, &basis);
                let ok = lattice_form.blocks.values().all(|g| {
                    g.entries().all(|x| is_p_integral(x, p)) && valuation(&g.det(f), p) == Some(0)
                });
                if ok {
                    found = Some((basis.clone(), b.clone(), lattice_form));
                    return true;
                }
            }
            false
        });
        if let Some((basis, scale, form)) = found {
            let lattice = LatticeModule::from_ambient(&ambient, basis, p)?;
            return Ok(TiltingFixture { lattice, form, scale, index_exponent: total });
        }
    }
    Err(HrError::SearchExhausted(format!("no self-dual lattice of index at most p^{max_dim} for p = {p}")))
}

/// Visits every choice of one subspace per weight with the given total
/// dimension; stops when `visit` returns true.
fn enumerate_graded(
    per_weight: &[Vec<Vec<Vec<u64>>>],
    left: usize,
    i: usize,
    choice: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == per_weight.len() {
        return left == 0 && visit(choice);
    }
    for (k, s) in per_weight[i].iter().enumerate() {
        if s.len() > left {
            continue;
        }
        choice[i] = k;
        if enumerate_graded(per_weight, left - s.len(), i + 1, choice, visit) {
            return true;
        }
    }
    false
}
