//! HR-forms over a field: adjoint raising operators, verification of the
//! four axioms, the Lie algebra action they induce, and the orthogonal
//! decomposition into F-cyclic standard summands.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{HrError, Result};
use crate::graded::{adjoint_op, f_closure, submodule_mi, BlockForm, GradedModule, GradedOp, GradedVector};
use crate::io::{serialize_matrix_map, serialize_rat};
use crate::linalg::Matrix;
use crate::paths::{standard_module, SimpleRootPath, StandardOptions};
use crate::roots::{UpSet, Weight};
use crate::scalar::{rat, valuation, Field, Rat, Ring};

/// Outcome of a single check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Check::Fail { witness: witness.into() }
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Check::Fail { witness } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HRReport {
    pub symmetric: Check,
    pub weight_orthogonal: Check,
    pub commutators: Check,
    pub closed_restrictions: Check,
    /// Up-sets whose restriction was checked directly.
    pub checked_upsets: Vec<UpSet>,
    pub overall: bool,
}

/// `E_α` for every simple root, adjoint to `F_α` with respect to `form`.
///
/// Over the p-local ring every Gram block has to be unimodular so that the
/// adjoints preserve the lattice.
pub fn adjoint_family(m: &GradedModule, form: &BlockForm) -> Result<Vec<GradedOp>> {
    m.check_form(form)?;
    let f = m.field();
    for (mu, g) in &form.blocks {
        let det = g.det(f);
        if det.is_zero() {
            return Err(HrError::SingularGram(mu.clone()));
        }
        if let Ring::PLocal(p) = m.ring() {
            let v = valuation(&det, p).unwrap_or(0);
            if v != 0 {
                return Err(HrError::NotUnimodular { weight: mu.clone(), valuation: v });
            }
        }
    }
    (0..m.root_system().rank()).map(|a| adjoint_op(m, form, a)).collect()
}

/// `h_α` acting on `M_μ` by `⟨μ, α∨⟩`.
pub fn cartan_op(m: &GradedModule, alpha: usize) -> GradedOp {
    GradedOp::diagonal(m.dims(), m.field(), |mu| rat(mu.0[alpha]))
}

fn first_singular_block(m: &GradedModule, form: &BlockForm) -> Option<Weight> {
    let f = m.field();
    form.blocks.iter().find(|(_, g)| g.det(f).is_zero()).map(|(mu, _)| mu.clone())
}

pub(crate) fn check_symmetric(form: &BlockForm) -> Check {
    match form.blocks.iter().find(|(_, g)| !g.is_symmetric()) {
        Some((mu, _)) => Check::fail(format!("Gram block at weight {mu} is not symmetric")),
        None => Check::Pass,
    }
}

/// Both commutator families `[E_α, F_α] = h_α` and `[E_α, F_β] = 0`.
pub fn check_commutators(m: &GradedModule, e: &[GradedOp]) -> Check {
    let f = m.field();
    for (a, ea) in e.iter().enumerate() {
        for b in 0..m.root_system().rank() {
            let comm = ea.commutator(m.op(b), f);
            let diff = if a == b { comm.sub(&cartan_op(m, a), f) } else { comm };
            if let Some(mu) = diff.first_nonzero() {
                return Check::fail(format!(
                    "[E_{}, F_{}] fails on weight {mu}",
                    a + 1,
                    b + 1
                ));
            }
        }
    }
    Check::Pass
}

/// Restriction of the form to `M_I` is non-degenerate; returns the first failing weight.
fn restriction_nondegenerate(m: &GradedModule, form: &BlockForm, upset: &UpSet) -> Result<Option<Weight>> {
    let f = m.field();
    let sub = submodule_mi(m, upset)?;
    for (mu, b) in &sub.basis {
        if b.cols() == 0 {
            continue;
        }
        let g = b.gram_of(form.block(mu), b, f);
        if g.det(f).is_zero() {
            return Ok(Some(mu.clone()));
        }
    }
    Ok(None)
}

/// Checks the HR axioms. Axiom (2) is certified for every closed subset by
/// a successful decomposition; `upsets` are additionally checked directly.
pub fn verify_hr(m: &GradedModule, form: &BlockForm, upsets: &[UpSet]) -> Result<HRReport> {
    m.check_form(form)?;
    let rational;
    let (m, form) = if let Ring::PLocal(_) = m.ring() {
        rational = m.with_ring(Ring::Rational)?;
        (&rational, form)
    } else {
        (m, form)
    };

    let symmetric = check_symmetric(form);
    let weight_orthogonal = Check::Pass;
    let singular = first_singular_block(m, form);
    let commutators = match &singular {
        Some(mu) => Check::Skipped { reason: format!("adjoint undefined: Gram block at {mu} is singular") },
        None => check_commutators(m, &adjoint_family(m, form)?),
    };

    let mut closed_restrictions = match &singular {
        Some(mu) => Check::fail(format!("form is degenerate on M_X at weight {mu}")),
        None => Check::Pass,
    };
    if closed_restrictions.passed() {
        for upset in upsets {
            if let Some(mu) = restriction_nondegenerate(m, form, upset)? {
                closed_restrictions = Check::fail(format!("restriction to M_I for I = {upset} is degenerate at weight {mu}"));
                break;
            }
        }
    }
    if closed_restrictions.passed() {
        closed_restrictions = if symmetric.passed() && commutators.passed() {
            match decompose(m, form) {
                Ok(_) => Check::Pass,
                Err(HrError::Decomposition(msg)) => Check::fail(msg),
                Err(e) => return Err(e),
            }
        } else {
            Check::Skipped { reason: "needs symmetry and commutators to certify all closed subsets".into() }
        };
    }
    let overall = symmetric.passed() && weight_orthogonal.passed() && commutators.passed() && closed_restrictions.passed();
    Ok(HRReport {
        symmetric,
        weight_orthogonal,
        commutators,
        closed_restrictions,
        checked_upsets: upsets.to_vec(),
        overall,
    })
}

/// The action of the Chevalley generators on `M` induced by an HR-form.
#[derive(Clone, Debug)]
pub struct ModuleStructure {
    pub f: Vec<GradedOp>,
    pub e: Vec<GradedOp>,
    pub h: Vec<GradedOp>,
    /// Every relation that was verified, in order.
    pub relations: Vec<String>,
    pub serre_checked: bool,
}

/// `(ad x)^n (y)`.
pub fn ad_power(x: &GradedOp, y: &GradedOp, n: i64, f: Field) -> GradedOp {
    let mut z = y.clone();
    for _ in 0..n {
        z = x.commutator(&z, f);
    }
    z
}

/// Builds `e_α, f_α, h_α` on `M` and verifies all defining relations of the
/// Lie algebra, including both Serre relations, as operator identities.
pub fn synthesize_g_module(m: &GradedModule, form: &BlockForm) -> Result<ModuleStructure> {
    let f = m.field();
    let rs = m.root_system();
    let rank = rs.rank();
    let e = adjoint_family(m, form)?;
    let fo: Vec<GradedOp> = m.ops().to_vec();
    let h: Vec<GradedOp> = (0..rank).map(|a| cartan_op(m, a)).collect();
    let cartan = rs.cartan();
    let mut relations = Vec::new();
    let mut require = |ok: bool, name: String| -> Result<()> {
        if ok {
            relations.push(name);
            Ok(())
        } else {
            Err(HrError::RelationViolation(name))
        }
    };
    for a in 0..rank {
        for b in 0..rank {
            let (i, j) = (a + 1, b + 1);
            require(h[a].commutator(&h[b], f).is_zero(), format!("[h{i},h{j}] = 0"))?;
            let c = rat(cartan[a][b]);
            require(
                h[a].commutator(&e[b], f).sub(&e[b].scale(&c, f), f).is_zero(),
                format!("[h{i},e{j}] = {} e{j}", cartan[a][b]),
            )?;
            require(
                h[a].commutator(&fo[b], f).add(&fo[b].scale(&c, f), f).is_zero(),
                format!("[h{i},f{j}] = {} f{j}", -cartan[a][b]),
            )?;
            let ef = e[a].commutator(&fo[b], f);
            if a == b {
                require(ef.sub(&h[a], f).is_zero(), format!("[e{i},f{i}] = h{i}"))?;
            } else {
                require(ef.is_zero(), format!("[e{i},f{j}] = 0"))?;
                // (ad e_a)^{1 − ⟨α_b, α_a∨⟩} e_b with ⟨α_b, α_a∨⟩ = cartan[a][b]
                let n = 1 - cartan[a][b];
                require(ad_power(&e[a], &e[b], n, f).is_zero(), format!("(ad e{i})^{n} e{j} = 0"))?;
                require(ad_power(&fo[a], &fo[b], n, f).is_zero(), format!("(ad f{i})^{n} f{j} = 0"))?;
            }
        }
    }
    Ok(ModuleStructure { f: fo, e, h, relations, serre_checked: true })
}

/// Checks that each `F_α` is a Lefschetz operator on every α-string:
/// `F_α^n` maps the slice `⟨·,α∨⟩ = n` bijectively onto the slice `−n`.
pub fn check_lefschetz(m: &GradedModule) -> Check {
    let f = m.field();
    let rs = m.root_system();
    for a in 0..rs.rank() {
        let alpha = rs.simple_root(a);
        for (mu, &d) in m.dims() {
            let n = mu.0[a];
            if n == 0 {
                continue;
            }
            let top = if n > 0 { mu.clone() } else { mu + &alpha.scale(-n) };
            let n = n.abs();
            let bottom = &top - &alpha.scale(n);
            if m.dim(&top) != d || m.dim(&bottom) != d {
                return Check::fail(format!("α{}-string through {mu}: slices ±{n} differ in dimension", a + 1));
            }
            if top != *mu {
                continue;
            }
            let mut block = Matrix::identity(d);
            let mut cur = top.clone();
            for _ in 0..n {
                block = m.block(a, &cur).mul(&block, f);
                cur = &cur - &alpha;
            }
            if block.det(f).is_zero() {
                return Check::fail(format!("F_{}^{n} is not bijective from weight {top}", a + 1));
            }
        }
    }
    Check::Pass
}

/// One F-cyclic summand `⟨m⟩_F ≅ V(λ)`.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub lambda: Weight,
    /// `(m, m)` for the generator `m`; the form on the summand is this multiple of the standard one.
    #[serde(serialize_with = "serialize_rat")]
    pub scalar: Rat,
    /// Per weight, the images `F_b(m)` of the representative paths of `V(λ)`, as columns.
    #[serde(serialize_with = "serialize_matrix_map")]
    pub embedding: BTreeMap<Weight, Matrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionResult {
    pub components: Vec<Component>,
    pub certified: bool,
}

impl DecompositionResult {
    /// Highest weights with multiplicity, in emission order.
    pub fn highest_weights(&self) -> Vec<Weight> {
        self.components.iter().map(|c| c.lambda.clone()).collect()
    }
}

/// Orthogonal basis of a Gram matrix without square roots. Returns the
/// coordinate vectors, or `None` if the form is degenerate.
pub fn orthogonal_basis(gram: &Matrix, f: Field) -> Option<Vec<Vec<Rat>>> {
    let k = gram.rows();
    let b = |x: &[Rat], y: &[Rat]| -> Rat {
        let gy = gram.mul_vec(y, f);
        x.iter().zip(&gy).fold(Rat::zero(), |acc, (u, v)| f.add(&acc, &f.mul(u, v)))
    };
    let mut pool: Vec<Vec<Rat>> = (0..k).map(|i| Matrix::identity(k).col(i)).collect();
    let mut out = Vec::with_capacity(k);
    while !pool.is_empty() {
        let pick = if let Some(i) = pool.iter().position(|v| !b(v, v).is_zero()) {
            pool.remove(i)
        } else {
            // all remaining vectors are isotropic: v + w is anisotropic when (v,w) ≠ 0
            let (i, j) = (0..pool.len())
                .flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j)))
                .find(|&(i, j)| !b(&pool[i], &pool[j]).is_zero())?;
            let sum: Vec<Rat> = pool[i].iter().zip(&pool[j]).map(|(x, y)| f.add(x, y)).collect();
            pool.remove(i);
            sum
        };
        let q = b(&pick, &pick);
        for v in pool.iter_mut() {
            let c = f.div(&b(v, &pick), &q).expect("anisotropic");
            for (x, y) in v.iter_mut().zip(&pick) {
                *x = f.sub(x, &f.mul(&c, y));
            }
        }
        out.push(pick);
    }
    Some(out)
}

/// `F_{b_1} ∘ ⋯ ∘ F_{b_l}(v)`.
pub fn apply_path(m: &GradedModule, path: &SimpleRootPath, v: &GradedVector) -> GradedVector {
    let f = m.field();
    path.0.iter().rev().fold(v.clone(), |acc, &a| m.op(a).apply(&acc, f))
}

fn maximal_weight(m: &GradedModule, support: &[Weight]) -> Weight {
    let rs = m.root_system();
    support
        .iter()
        .filter(|mu| !support.iter().any(|nu| rs.lt(mu, nu)))
        .max()
        .cloned()
        .expect("nonempty support")
}

/// Splits `M` into mutually orthogonal F-cyclic summands, each matched
/// against the standard module of its highest weight.
pub fn decompose(m: &GradedModule, form: &BlockForm) -> Result<DecompositionResult> {
    m.check_form(form)?;
    let fail = |msg: String| HrError::Decomposition(msg);
    let ring = match m.ring() {
        Ring::PLocal(_) => Ring::Rational,
        r => r,
    };
    let rational;
    let m = if ring != m.ring() {
        rational = m.with_ring(ring)?;
        &rational
    } else {
        m
    };
    let f = m.field();
    if f.characteristic() == 2 {
        return Err(HrError::CharacteristicTwo);
    }
    if let Some(mu) = first_singular_block(m, form) {
        return Err(fail(format!("form is degenerate at weight {mu}")));
    }
    if let Check::Fail { witness } = check_symmetric(form) {
        return Err(fail(witness));
    }
    let e = adjoint_family(m, form)?;
    if let Check::Fail { witness } = check_commutators(m, &e) {
        return Err(fail(witness));
    }
    let rs = m.root_system();

    // current orthogonal complement, as column bases in M coordinates
    let mut rest: BTreeMap<Weight, Matrix> =
        m.dims().iter().map(|(mu, &d)| (mu.clone(), Matrix::identity(d))).collect();
    let mut components: Vec<Component> = Vec::new();
    loop {
        let support: Vec<Weight> = rest.iter().filter(|(_, b)| b.cols() > 0).map(|(mu, _)| mu.clone()).collect();
        if support.is_empty() {
            break;
        }
        let lambda = maximal_weight(m, &support);
        let top = &rest[&lambda];
        let g_top = top.gram_of(form.block(&lambda), top, f);
        let coords = orthogonal_basis(&g_top, f).ok_or_else(|| {
            fail(format!("no anisotropic vector at weight {lambda}: restriction to M_I is degenerate"))
        })?;

        let depth = m
            .support()
            .filter_map(|nu| rs.height_between(&lambda, nu))
            .max()
            .unwrap_or(0)
            + 1;
        let standard = standard_module(rs, ring, &lambda, StandardOptions { depth: Some(depth), parallel: false })?;

        let first_new = components.len();
        for y in coords {
            let gen_vec = top.mul_vec(&y, f);
            let generator: GradedVector = BTreeMap::from([(lambda.clone(), gen_vec)]);
            let scalar = form.pair(&generator, &generator, f);
            let comp = match_standard(m, form, &standard, &generator, &scalar)?;
            components.push(Component { lambda: lambda.clone(), scalar, embedding: comp });
        }

        // pairwise orthogonality of the new summands with each other and with earlier ones
        for i in first_new..components.len() {
            for j in 0..i {
                for (mu, bi) in &components[i].embedding {
                    if let Some(bj) = components[j].embedding.get(mu) {
                        if !bi.gram_of(form.block(mu), bj, f).is_zero() {
                            return Err(fail(format!(
                                "summands {} and {} are not orthogonal at weight {mu}",
                                j + 1,
                                i + 1
                            )));
                        }
                    }
                }
            }
        }

        // rest ← rest ∩ (new summands)^⊥
        let mut next = BTreeMap::new();
        for (mu, b) in &rest {
            let cols: Vec<Vec<Rat>> = components[first_new..]
                .iter()
                .filter_map(|c| c.embedding.get(mu))
                .flat_map(|e| (0..e.cols()).map(move |j| e.col(j)))
                .collect();
            if cols.is_empty() {
                next.insert(mu.clone(), b.clone());
                continue;
            }
            let used = Matrix::from_cols(m.dim(mu), &cols);
            let pair = used.gram_of(form.block(mu), b, f);
            let ker = pair.kernel(f);
            let nb = b.mul(&ker, f);
            if nb.cols() + used.cols() != b.cols() {
                return Err(fail(format!("M_I is degenerate at weight {mu} for I generated by {lambda}")));
            }
            next.insert(mu.clone(), nb);
        }
        rest = next;
    }
    Ok(DecompositionResult { components, certified: true })
}

/// Checks `⟨generator⟩_F ≅ V(λ)` through the map `b ↦ F_b(generator)` on
/// representative paths and returns the image basis per weight.
fn match_standard(
    m: &GradedModule,
    form: &BlockForm,
    standard: &crate::paths::StandardModule,
    generator: &GradedVector,
    scalar: &Rat,
) -> Result<BTreeMap<Weight, Matrix>> {
    let f = m.field();
    let lambda = &standard.lambda;
    let fail = |msg: String| HrError::Decomposition(format!("summand of highest weight {lambda}: {msg}"));
    let closure = f_closure(m, std::slice::from_ref(generator))?;
    if closure.dims() != *standard.module.dims() {
        return Err(fail(format!(
            "character {:?} differs from V(λ) {:?}",
            closure.dims(),
            standard.module.dims()
        )));
    }
    let mut images = BTreeMap::new();
    for (mu, reps) in &standard.representatives {
        let cols: Vec<Vec<Rat>> = reps
            .iter()
            .map(|b| {
                let v = apply_path(m, b, generator);
                v.get(mu).cloned().unwrap_or_else(|| vec![Rat::zero(); m.dim(mu)])
            })
            .collect();
        let img = Matrix::from_cols(m.dim(mu), &cols);
        if img.rank(f) != reps.len() {
            return Err(fail(format!("images of representatives are dependent at {mu}")));
        }
        let gram = img.gram_of(form.block(mu), &img, f);
        if gram != standard.form.block(mu).scale(scalar, f) {
            return Err(fail(format!("form is not a multiple of the standard form at {mu}")));
        }
        images.insert(mu.clone(), img);
    }
    for (a, op) in standard.module.ops().iter().enumerate() {
        for (mu, img) in &images {
            let t = op.target(mu);
            let lhs = m.block(a, mu).mul(img, f);
            let rhs = match (images.get(&t), op.block(mu)) {
                (Some(timg), Some(b)) => timg.mul(b, f),
                _ => Matrix::zeros(m.dim(&t), img.cols()),
            };
            if lhs != rhs {
                return Err(fail(format!("F_{} does not match at weight {mu}", a + 1)));
            }
        }
    }
    Ok(images)
}
