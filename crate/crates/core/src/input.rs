//! Input documents.
//!
//! ```toml
//! format_version = 1
//! tol = 1e-9            # optional
//!
//! [berger]
//! lambda = 1.0
//! a = [0.1666, 0.1666, 0.6666]
//! b = [-0.1666, -0.1666, 0.3333]
//! ```
//!
//! or a `[riemann]` table with `components = [{ indices = [1, 2, 1, 2], value = 1.0 }, ...]`.
//! Indices are 1-based and `R(i,j,i,j)` is the sectional curvature of the
//! `e_i, e_j` plane. Components not listed are filled in by the curvature
//! symmetries or are zero.

use serde::{Deserialize, Serialize};

use crate::berger::BergerForm;
use crate::error::{Error, Result};
use crate::tensor::{Components, RiemannTensor4, DEFAULT_TOL, DIM};

pub const FORMAT_VERSION: u32 = 1;

/// Line separating documents in a stream.
pub const SEPARATOR: &str = "---";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub berger: Option<BergerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riemann: Option<RiemannSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BergerSection {
    pub lambda: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiemannSection {
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub indices: [usize; 4],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Curvature {
    Berger(BergerForm),
    Riemann(RiemannTensor4),
}

impl Curvature {
    pub fn tensor(&self) -> RiemannTensor4 {
        match self {
            Curvature::Berger(bf) => bf.tensor(),
            Curvature::Riemann(rm) => *rm,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Curvature::Berger(_) => "berger",
            Curvature::Riemann(_) => "riemann",
        }
    }
}

impl InputDocument {
    pub fn from_berger(bf: &BergerForm) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            tol: None,
            berger: Some(BergerSection {
                lambda: bf.lambda(),
                a: bf.a(),
                b: bf.b(),
            }),
            riemann: None,
        }
    }

    /// Every nonzero component with `i < j`, `k < l`, `(i,j) <= (k,l)`.
    pub fn from_tensor(rm: &RiemannTensor4) -> Self {
        let mut components = Vec::new();
        for i in 0..DIM {
            for j in i + 1..DIM {
                for k in i..DIM {
                    for l in k + 1..DIM {
                        if (i, j) <= (k, l) && rm.get(i, j, k, l) != 0.0 {
                            components.push(Component {
                                indices: [i + 1, j + 1, k + 1, l + 1],
                                value: rm.get(i, j, k, l),
                            });
                        }
                    }
                }
            }
        }
        Self {
            format_version: FORMAT_VERSION,
            tol: None,
            berger: None,
            riemann: Some(RiemannSection { components }),
        }
    }

    /// Validated curvature data. `tol` overrides the document's own value.
    pub fn curvature(&self, tol: Option<f64>) -> Result<Curvature> {
        let tol = tol.or(self.tol).unwrap_or(DEFAULT_TOL);
        match (&self.berger, &self.riemann) {
            (Some(b), None) => Ok(Curvature::Berger(BergerForm::new(b.a, b.b, b.lambda, tol)?)),
            (None, Some(r)) => Ok(Curvature::Riemann(fill_components(&r.components, tol)?)),
            _ => Err(Error::Parse("expected exactly one of [berger] or [riemann]".into())),
        }
    }
}

/// The 8 index permutations related by the pair symmetries, with signs.
fn orbit([i, j, k, l]: [usize; 4]) -> [([usize; 4], f64); 8] {
    [
        ([i, j, k, l], 1.0),
        ([j, i, k, l], -1.0),
        ([i, j, l, k], -1.0),
        ([j, i, l, k], 1.0),
        ([k, l, i, j], 1.0),
        ([l, k, i, j], -1.0),
        ([k, l, j, i], -1.0),
        ([l, k, j, i], 1.0),
    ]
}

fn fill_components(list: &[Component], tol: f64) -> Result<RiemannTensor4> {
    let mut c: Components = [[[[0.0; DIM]; DIM]; DIM]; DIM];
    let mut set = [[[[false; DIM]; DIM]; DIM]; DIM];
    for comp in list {
        if let Some(&bad) = comp.indices.iter().find(|&&x| !(1..=DIM).contains(&x)) {
            return Err(Error::Parse(format!("index {bad} out of range 1..=4 in {:?}", comp.indices)));
        }
        if !comp.value.is_finite() {
            return Err(Error::Parse(format!("non-finite value at {:?}", comp.indices)));
        }
        let idx = comp.indices.map(|x| x - 1);
        if idx[0] == idx[1] || idx[2] == idx[3] {
            if comp.value.abs() > tol {
                return Err(Error::Symmetry {
                    symmetry: "antisymmetry in each index pair",
                    residual: comp.value.abs(),
                    tol,
                });
            }
            continue;
        }
        for ([p, q, r, s], sign) in orbit(idx) {
            let v = sign * comp.value;
            if set[p][q][r][s] && (c[p][q][r][s] - v).abs() > tol {
                let shown = [p + 1, q + 1, r + 1, s + 1].map(|x| x.to_string()).join(",");
                return Err(Error::ConflictingComponent {
                    indices: shown,
                    first: c[p][q][r][s],
                    second: v,
                });
            }
            c[p][q][r][s] = v;
            set[p][q][r][s] = true;
        }
    }
    RiemannTensor4::from_components(c, tol)
}

pub fn parse(text: &str) -> Result<InputDocument> {
    let doc: InputDocument = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            doc.format_version
        )));
    }
    if doc.berger.is_some() == doc.riemann.is_some() {
        return Err(Error::Parse("expected exactly one of [berger] or [riemann]".into()));
    }
    Ok(doc)
}

/// Canonical form: Riemann components reduced to `i < j`, `k < l`,
/// `(i,j) <= (k,l)`, sign-adjusted, deduplicated and sorted.
pub fn normalize(doc: &InputDocument) -> InputDocument {
    let mut out = doc.clone();
    if let Some(r) = &mut out.riemann {
        let mut comps: Vec<Component> = r
            .components
            .iter()
            .filter(|c| c.indices[0] != c.indices[1] && c.indices[2] != c.indices[3])
            .map(|c| {
                let (rep, sign) = orbit(c.indices)
                    .into_iter()
                    .filter(|(x, _)| x[0] < x[1] && x[2] < x[3] && (x[0], x[1]) <= (x[2], x[3]))
                    .next()
                    .expect("every orbit has a canonical member");
                Component {
                    indices: rep,
                    value: sign * c.value,
                }
            })
            .collect();
        comps.sort_by_key(|c| c.indices);
        comps.dedup_by(|x, y| x.indices == y.indices);
        r.components = comps;
    }
    out
}

/// TOML text of the canonical form.
pub fn emit(doc: &InputDocument) -> String {
    toml::to_string(&normalize(doc)).expect("documents always serialize")
}

/// Documents separated by lines consisting of `---`.
pub fn parse_stream(text: &str) -> Result<Vec<InputDocument>> {
    let mut docs = Vec::new();
    let mut current = String::new();
    for line in text.lines().chain(std::iter::once(SEPARATOR)) {
        if line.trim() == SEPARATOR {
            let has_content = current
                .lines()
                .any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
            if has_content {
                docs.push(parse(&current)?);
            }
            current.clear();
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    Ok(docs)
}

pub fn read(path: &std::path::Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}
