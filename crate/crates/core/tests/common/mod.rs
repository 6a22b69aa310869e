#![allow(dead_code)]

use std::collections::BTreeMap;

use hrforms::paths::{standard_module, StandardOptions};
use hrforms::scalar::{rat, rat_frac};
use hrforms::{BlockForm, GradedModule, Matrix, Ring, RootSystem, Weight};
use rand::Rng;

pub fn w(c: &[i64]) -> Weight {
    Weight(c.to_vec())
}

pub fn standard(rs: &RootSystem, lambda: &[i64]) -> (GradedModule, BlockForm) {
    let v = standard_module(rs, Ring::Rational, &w(lambda), StandardOptions::default()).unwrap();
    (v.module, v.form)
}

/// A direct sum of standard modules in scrambled coordinates.
pub struct Instance {
    pub module: GradedModule,
    pub form: BlockForm,
    /// Highest weights of the summands, sorted.
    pub summands: Vec<Weight>,
}

fn random_unit(rng: &mut impl Rng) -> hrforms::Rat {
    let n = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat_frac(n, rng.gen_range(1..=4))
}

/// Lower unitriangular times upper triangular with nonzero diagonal.
fn random_invertible(d: usize, rng: &mut impl Rng) -> Matrix {
    let mut lower = Matrix::identity(d);
    let mut upper = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            if i > j {
                lower[(i, j)] = rat(rng.gen_range(-2..=2));
            } else if i < j {
                upper[(i, j)] = rat(rng.gen_range(-2..=2));
            } else {
                upper[(i, j)] = random_unit(rng);
            }
        }
    }
    lower.mul(&upper, hrforms::Field::Rational)
}

/// Up to four summands on A1 or A2, each form scaled by a random nonzero
/// rational, then a random invertible change of basis at every weight.
pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let rs = if rng.gen_bool(0.5) { RootSystem::a1() } else { RootSystem::a2() };
    let count = rng.gen_range(1..=4);
    let mut acc: Option<(GradedModule, BlockForm)> = None;
    let mut summands = Vec::new();
    for _ in 0..count {
        let lambda: Vec<i64> = if rs.rank() == 1 {
            vec![rng.gen_range(0..=4)]
        } else {
            vec![rng.gen_range(0..=1), rng.gen_range(0..=1)]
        };
        let (m, g) = standard(&rs, &lambda);
        let g = g.scale(&random_unit(rng), hrforms::Field::Rational);
        summands.push(w(&lambda));
        acc = Some(match acc {
            None => (m, g),
            Some((am, ag)) => (am.direct_sum(&m).unwrap(), ag.direct_sum(&g)),
        });
    }
    let (m, g) = acc.unwrap();
    let change: BTreeMap<Weight, Matrix> =
        m.dims().iter().map(|(mu, &d)| (mu.clone(), random_invertible(d, rng))).collect();
    let module = m.change_basis(&change).unwrap();
    let form = m.transform_form(&g, &change);
    summands.sort();
    Instance { module, form, summands }
}
