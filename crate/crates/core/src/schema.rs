//! JSON forms of states, generators and built models. Matrices are row-major
//! arrays of rows, each complex entry a two-element `[re, im]` array.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::PurityCertificate;
use crate::error::{Error, Result};
use crate::flowbuild::{Branch, PureFlowModel};
use crate::generator::LindbladGenerator;
use crate::matrixcore::ComplexMatrix;
use crate::states::FaithfulState;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub r: usize,
    pub eigenvalue_list: Vec<f64>,
    pub basis: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub r: usize,
    pub kraus: Vec<MatrixJson>,
    pub drift: MatrixJson,
    pub state: StateJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    #[serde(flatten)]
    pub generator: GeneratorJson,
    pub certificate: PurityCertificate,
    pub index: usize,
    pub branch: Branch,
    pub kraus_selection: Vec<[usize; 2]>,
}

/// Generator document, optionally carrying the fields of a built model.
#[derive(Debug, Clone, PartialEq, Deserialize)]
struct AnyJson {
    #[serde(flatten)]
    generator: GeneratorJson,
    certificate: Option<PurityCertificate>,
    index: Option<usize>,
    branch: Option<Branch>,
    kraus_selection: Option<Vec<[usize; 2]>>,
}

/// A parsed generator document.
#[derive(Debug, Clone)]
pub struct LoadedGenerator {
    pub generator: LindbladGenerator,
    pub state: FaithfulState,
    /// Recorded certificate, index, branch and selection for built models.
    pub model: Option<ModelJson>,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, r: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != r) {
        return Err(Error::Schema(format!("{what} must be {r}x{r}")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Schema(format!("{what} has non-finite entries")));
    }
    Ok(ComplexMatrix::from_fn(r, r, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn state_to_json(state: &FaithfulState) -> StateJson {
    StateJson {
        r: state.dimension(),
        eigenvalue_list: state.eigenvalue_list().to_vec(),
        basis: matrix_to_json(state.basis()),
    }
}

pub fn state_from_json(s: &StateJson) -> Result<FaithfulState> {
    if s.eigenvalue_list.len() != s.r {
        return Err(Error::Schema(format!(
            "eigenvalue_list has {} entries for r = {}",
            s.eigenvalue_list.len(),
            s.r
        )));
    }
    let basis = matrix_from_json(&s.basis, s.r, "state basis")?;
    FaithfulState::new(&s.eigenvalue_list, &basis)
        .map_err(|e| Error::Schema(format!("invalid state: {e}")))
}

pub fn generator_to_json(generator: &LindbladGenerator, state: &FaithfulState) -> GeneratorJson {
    GeneratorJson {
        r: generator.dimension(),
        kraus: generator.kraus().iter().map(matrix_to_json).collect(),
        drift: matrix_to_json(generator.drift()),
        state: state_to_json(state),
    }
}

pub fn model_to_json(model: &PureFlowModel) -> ModelJson {
    ModelJson {
        generator: generator_to_json(&model.generator, &model.state),
        certificate: model.certificate.clone(),
        index: model.index,
        branch: model.branch,
        kraus_selection: model.kraus_selection.iter().map(|&(i, j)| [i, j]).collect(),
    }
}

pub fn to_pretty_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("schema types always serialize");
    s.push('\n');
    s
}

/// Parses a generator or model document.
pub fn load_generator(text: &str) -> Result<LoadedGenerator> {
    let doc: AnyJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let g = &doc.generator;
    if g.state.r != g.r {
        return Err(Error::Schema(format!(
            "state has r = {} but the generator has r = {}",
            g.state.r, g.r
        )));
    }
    let state = state_from_json(&g.state)?;
    let kraus = g
        .kraus
        .iter()
        .enumerate()
        .map(|(k, m)| matrix_from_json(m, g.r, &format!("kraus[{k}]")))
        .collect::<Result<_>>()?;
    let drift = matrix_from_json(&g.drift, g.r, "drift")?;
    let generator =
        LindbladGenerator::new(kraus, drift).map_err(|e| Error::Schema(e.to_string()))?;
    let model = match (doc.certificate, doc.index, doc.branch, doc.kraus_selection) {
        (Some(certificate), Some(index), Some(branch), Some(kraus_selection)) => Some(ModelJson {
            generator: doc.generator,
            certificate,
            index,
            branch,
            kraus_selection,
        }),
        (None, None, None, None) => None,
        _ => return Err(Error::Schema("model fields must appear together".into())),
    };
    Ok(LoadedGenerator {
        generator,
        state,
        model,
    })
}
