//! JSON encoding of graded modules, forms and lattices.
//!
//! Rationals are strings (`"3"`, `"-1/2"`), weights are integer arrays and
//! operators are keyed `alpha_1, alpha_2, …`. Weights are written in
//! decreasing lexicographic order, so equal inputs serialize to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{HrError, Result};
use crate::graded::{BlockForm, GradedModule};
use crate::linalg::Matrix;
use crate::roots::{RootSystem, Weight};
use crate::scalar::{decode_rat, encode_rat, Rat, Ring};

pub fn serialize_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&encode_rat(x))
}

pub fn encode_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(encode_rat).collect()).collect()
}

/// Decodes a matrix of the given shape; an empty list is accepted for zero rows.
pub fn decode_matrix(rows: &[Vec<String>], shape: (usize, usize)) -> Result<Matrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(HrError::Format(format!("expected a {}x{} matrix", shape.0, shape.1)));
    }
    let data = rows
        .iter()
        .map(|r| r.iter().map(|s| decode_rat(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows_shaped(shape.0, shape.1, data))
}

#[derive(Serialize)]
struct WeightMatrix<'a> {
    mu: &'a Weight,
    matrix: Vec<Vec<String>>,
}

pub fn serialize_matrix_map<S: Serializer>(
    map: &BTreeMap<Weight, Matrix>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(mu, m)| WeightMatrix { mu, matrix: encode_matrix(m) }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub coords: Weight,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorBlock {
    pub from: Weight,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramBlock {
    pub mu: Weight,
    pub gram: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisBlock {
    pub mu: Weight,
    pub basis: Vec<Vec<String>>,
}

/// A form given either as a list of blocks or, for one weight, a single block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum FormJson {
    Blocks(Vec<GramBlock>),
    Single(GramBlock),
}

impl FormJson {
    fn blocks(&self) -> Vec<GramBlock> {
        match self {
            FormJson::Blocks(b) => b.clone(),
            FormJson::Single(b) => vec![b.clone()],
        }
    }
}

/// On-disk module: root system, ring, weights, operators, and optionally a
/// form, a prime and per-weight lattice bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub root_system: RootSystem,
    pub ring: Ring,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub weights: Vec<WeightEntry>,
    pub operators: BTreeMap<String, Vec<OperatorBlock>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<FormJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_basis: Option<Vec<BasisBlock>>,
}

/// Parsed contents of a [`ModuleFile`].
#[derive(Clone, Debug)]
pub struct ModuleData {
    pub module: GradedModule,
    pub form: Option<BlockForm>,
    pub p: Option<u64>,
    pub lattice_basis: Option<BTreeMap<Weight, Matrix>>,
}

fn op_key(i: usize) -> String {
    format!("alpha_{}", i + 1)
}

impl ModuleFile {
    pub fn from_module(m: &GradedModule, form: Option<&BlockForm>) -> Self {
        let weights = m.dims().iter().rev().map(|(mu, &dim)| WeightEntry { coords: mu.clone(), dim }).collect();
        let operators = m
            .ops()
            .iter()
            .enumerate()
            .map(|(i, op)| {
                let blocks = op
                    .blocks
                    .iter()
                    .rev()
                    .map(|(mu, b)| OperatorBlock { from: mu.clone(), matrix: encode_matrix(b) })
                    .collect();
                (op_key(i), blocks)
            })
            .collect();
        let form = form.map(|f| {
            FormJson::Blocks(
                f.blocks.iter().rev().map(|(mu, g)| GramBlock { mu: mu.clone(), gram: encode_matrix(g) }).collect(),
            )
        });
        ModuleFile {
            root_system: m.root_system().clone(),
            ring: m.ring(),
            p: None,
            weights,
            operators,
            form,
            lattice_basis: None,
        }
    }

    pub fn with_lattice(mut self, p: u64, basis: &BTreeMap<Weight, Matrix>) -> Self {
        self.p = Some(p);
        self.lattice_basis =
            Some(basis.iter().rev().map(|(mu, b)| BasisBlock { mu: mu.clone(), basis: encode_matrix(b) }).collect());
        self
    }

    pub fn has_form(&self) -> bool {
        self.form.is_some()
    }

    pub fn parse(&self) -> Result<ModuleData> {
        let rs = &self.root_system;
        let rank = rs.rank();
        let mut dims = BTreeMap::new();
        for w in &self.weights {
            if w.coords.rank() != rank {
                return Err(HrError::Format(format!("weight {} has {} coordinates", w.coords, w.coords.rank())));
            }
            if dims.insert(w.coords.clone(), w.dim).is_some() {
                return Err(HrError::Format(format!("weight {} listed twice", w.coords)));
            }
        }
        if let Some(key) = self.operators.keys().find(|k| {
            !k.strip_prefix("alpha_")
                .and_then(|n| n.parse::<usize>().ok())
                .is_some_and(|n| (1..=rank).contains(&n))
        }) {
            return Err(HrError::Format(format!("unknown operator key '{key}'")));
        }
        let dim = |mu: &Weight| dims.get(mu).copied().unwrap_or(0);
        let mut ops = Vec::with_capacity(rank);
        for i in 0..rank {
            let alpha = rs.simple_root(i);
            let mut blocks = BTreeMap::new();
            for b in self.operators.get(&op_key(i)).map(Vec::as_slice).unwrap_or(&[]) {
                let shape = (dim(&(&b.from - &alpha)), dim(&b.from));
                let m = decode_matrix(&b.matrix, shape)?;
                if blocks.insert(b.from.clone(), m).is_some() {
                    return Err(HrError::Format(format!("two {} blocks at {}", op_key(i), b.from)));
                }
            }
            ops.push(blocks);
        }
        let module = GradedModule::new(rs.clone(), self.ring, dims.clone(), ops)?;
        let form = match &self.form {
            None => None,
            Some(fj) => {
                let mut blocks = BTreeMap::new();
                for g in fj.blocks() {
                    let d = dim(&g.mu);
                    blocks.insert(g.mu.clone(), decode_matrix(&g.gram, (d, d))?);
                }
                let form = BlockForm::new(blocks);
                module.check_form(&form)?;
                Some(form)
            }
        };
        let lattice_basis = match &self.lattice_basis {
            None => None,
            Some(list) => {
                let mut out = BTreeMap::new();
                for b in list {
                    let d = dim(&b.mu);
                    out.insert(b.mu.clone(), decode_matrix(&b.basis, (d, d))?);
                }
                Some(out)
            }
        };
        if let Some(p) = self.p {
            Ring::p_local(p)?;
        }
        Ok(ModuleData { module, form, p: self.p, lattice_basis })
    }
}

pub fn read_module(text: &str) -> Result<ModuleData> {
    let file: ModuleFile = serde_json::from_str(text).map_err(|e| HrError::Format(e.to_string()))?;
    file.parse()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_module(m: &GradedModule, form: Option<&BlockForm>) -> String {
    to_json(&ModuleFile::from_module(m, form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{standard_module, StandardOptions};

    #[test]
    fn module_round_trip() {
        let a2 = RootSystem::a2();
        let v = standard_module(&a2, Ring::Rational, &Weight(vec![1, 1]), StandardOptions::default()).unwrap();
        let text = write_module(&v.module, Some(&v.form));
        let back = read_module(&text).unwrap();
        assert_eq!(back.module, v.module);
        assert_eq!(back.form.as_ref(), Some(&v.form));
        assert_eq!(write_module(&back.module, back.form.as_ref()), text);
    }

    #[test]
    fn single_form_object_accepted() {
        let text = r#"{"root_system":{"type_label":"A1","cartan":[[2]]},"ring":{"kind":"Q"},
            "weights":[{"coords":[0],"dim":1}],"operators":{},"form":{"mu":[0],"gram":[["2/4"]]}}"#;
        let d = read_module(text).unwrap();
        assert_eq!(d.form.unwrap().block(&Weight(vec![0]))[(0, 0)], crate::scalar::rat_frac(1, 2));
    }

    #[test]
    fn malformed_inputs_rejected() {
        let base = r#"{"root_system":{"type_label":"A1","cartan":[[2]]},"ring":RING,
            "weights":[{"coords":[1],"dim":1},{"coords":[-1],"dim":1}],"operators":{"OPS":[{"from":[1],"matrix":[["1"]]}]}}"#;
        let make = |ring: &str, ops: &str| base.replace("RING", ring).replace("OPS", ops);
        assert!(read_module(&make(r#"{"kind":"Q"}"#, "alpha_1")).is_ok());
        assert!(matches!(read_module(&make(r#"{"kind":"Fq","p":2}"#, "alpha_1")), Err(HrError::Format(_))));
        assert!(read_module(&make(r#"{"kind":"Q"}"#, "alpha_2")).is_err());
        assert!(read_module(&base.replace("RING", r#"{"kind":"Q"}"#).replace("OPS", "alpha_1").replace("\"1\"]", "\"1/0\"]"))
            .is_err());
    }
}
