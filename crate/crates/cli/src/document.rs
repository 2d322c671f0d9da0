//! The JSON workspace document and its canonical form.
//!
//! Complex numbers are `[re, im]`, matrices are row-major nested arrays,
//! block matrices are arrays of matrices, and infinite multiplicities are
//! the string `"inf"`. Objects live in named maps per category and refer
//! to algebras by name.

use std::collections::BTreeMap;
use std::fmt;

use rtp_core::modules::{ExtendedNat, Side};
use rtp_core::{BlockMatrix, CMatrix, C64};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functionals: BTreeMap<String, FunctionalEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, VectorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub representations: BTreeMap<String, RepresentationEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inclusions: BTreeMap<String, InclusionEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraEntry {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalEntry {
    pub algebra: String,
    pub density: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorEntry {
    pub blocks: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Left,
    Right,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Side {
        match s {
            SideName::Left => Side::Left,
            SideName::Right => Side::Right,
        }
    }
}

/// Multiplicity entry: a nonnegative integer or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Multiplicity(pub ExtendedNat);

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ExtendedNat::Finite(n) => s.serialize_u64(n),
            ExtendedNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Multiplicity;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Multiplicity, E> {
                Ok(Multiplicity(ExtendedNat::Finite(v)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Multiplicity, E> {
                u64::try_from(v)
                    .map(|v| Multiplicity(ExtendedNat::Finite(v)))
                    .map_err(|_| E::custom(format!("negative multiplicity {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Multiplicity, E> {
                v.parse().map(Multiplicity).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleEntry {
    pub algebra: String,
    pub side: SideName,
    pub multiplicities: Vec<Multiplicity>,
}

/// `images[k][i n_k + j]` is the image of the matrix unit `e_ij` of block `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationEntry {
    pub algebra: String,
    pub dim: usize,
    pub images: Vec<Vec<Matrix>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleEntry {
    pub left: String,
    pub right: String,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionEntry {
    pub sub: String,
    pub ambient: String,
    pub lambda: Vec<Vec<u64>>,
}

impl Document {
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Stable field order, sorted names, shortest round-trip floats, and
    /// `-0` written as `0`.
    pub fn to_canonical(&self) -> String {
        let mut doc = self.clone();
        doc.normalize_zeros();
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }
}

impl Document {
    fn normalize_zeros(&mut self) {
        fn fix(m: &mut Matrix) {
            for z in m.iter_mut().flatten().flatten() {
                *z += 0.0;
            }
        }
        for f in self.functionals.values_mut() {
            f.density.iter_mut().for_each(fix);
        }
        for v in self.vectors.values_mut() {
            v.blocks.iter_mut().for_each(fix);
        }
        for r in self.representations.values_mut() {
            r.images.iter_mut().flatten().for_each(fix);
        }
    }
}

/// `text` rewritten in canonical form.
pub fn canonicalize(text: &str) -> serde_json::Result<String> {
    Ok(Document::parse(text)?.to_canonical())
}

pub fn complex_to_json(z: C64) -> Complex {
    [z.re, z.im]
}

pub fn matrix_from_json(m: &Matrix) -> Result<CMatrix, String> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err("ragged matrix rows".into());
    }
    if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err("non-finite matrix entry".into());
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        C64::new(m[i][j][0], m[i][j][1])
    }))
}

pub fn matrix_to_json(m: &CMatrix) -> Matrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect())
        .collect()
}

pub fn blocks_from_json(blocks: &[Matrix]) -> Result<BlockMatrix, String> {
    Ok(BlockMatrix::from_blocks(
        blocks
            .iter()
            .map(matrix_from_json)
            .collect::<Result<_, _>>()?,
    ))
}

pub fn blocks_to_json(b: &BlockMatrix) -> Vec<Matrix> {
    b.blocks().iter().map(matrix_to_json).collect()
}

/// Real diagonal matrix in document form.
pub fn diagonal_matrix(values: &[f64]) -> Matrix {
    let n = values.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { [values[i], 0.0] } else { [0.0, 0.0] })
                .collect()
        })
        .collect()
}
