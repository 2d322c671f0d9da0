//! Resolution of a [`Document`] into library objects, with a per-object
//! validation report.

use std::collections::BTreeMap;

use rtp_core::correspondences::{BimoduleMatrix, Inclusion, IntMatrix};
use rtp_core::modules::{ModuleClass, Representation};
use rtp_core::{functional_from_density, BlockMatrix, MultiMatrixAlgebra, PositiveFunctional};
use serde::Serialize;

use crate::document::{self, Document};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub invariant: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectReport {
    pub category: &'static str,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Runs named checks in order and stops at the first failure.
struct Checker {
    checks: Vec<Check>,
    failed: bool,
}

impl Checker {
    fn new() -> Self {
        Self {
            checks: Vec::new(),
            failed: false,
        }
    }

    fn step<T>(
        &mut self,
        invariant: &'static str,
        f: impl FnOnce() -> Result<T, String>,
    ) -> Option<T> {
        if self.failed {
            return None;
        }
        match f() {
            Ok(v) => {
                self.checks.push(Check {
                    invariant,
                    pass: true,
                    detail: String::new(),
                });
                Some(v)
            }
            Err(detail) => {
                self.failed = true;
                self.checks.push(Check {
                    invariant,
                    pass: false,
                    detail,
                });
                None
            }
        }
    }

    fn finish(self, category: &'static str, name: &str) -> ObjectReport {
        ObjectReport {
            category,
            name: name.to_string(),
            pass: !self.failed,
            checks: self.checks,
        }
    }
}

/// Resolved objects of a document. Objects that fail validation are absent.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub algebras: BTreeMap<String, MultiMatrixAlgebra>,
    pub functionals: BTreeMap<String, PositiveFunctional>,
    pub vectors: BTreeMap<String, BlockMatrix>,
    pub modules: BTreeMap<String, ModuleClass>,
    pub representations: BTreeMap<String, Representation>,
    pub bimodules: BTreeMap<String, BimoduleMatrix>,
    pub inclusions: BTreeMap<String, Inclusion>,
    /// Algebra name for every module, functional, representation and so on.
    pub algebra_names: BTreeMap<(String, String), String>,
}

fn algebra_ref<'a>(
    algebras: &'a BTreeMap<String, MultiMatrixAlgebra>,
    name: &str,
) -> Result<&'a MultiMatrixAlgebra, String> {
    algebras
        .get(name)
        .ok_or_else(|| format!("unknown or invalid algebra '{name}'"))
}

fn int_matrix(rows: &[Vec<u64>]) -> Result<IntMatrix, String> {
    IntMatrix::from_rows(rows).map_err(|e| e.to_string())
}

impl Workspace {
    pub fn resolve(doc: &Document) -> (Workspace, Vec<ObjectReport>) {
        let mut ws = Workspace::default();
        let mut reports = Vec::new();

        for (name, entry) in &doc.algebras {
            let mut c = Checker::new();
            if let Some(a) = c.step("nonempty blocks", || {
                MultiMatrixAlgebra::new(&entry.blocks).map_err(|e| e.to_string())
            }) {
                ws.algebras.insert(name.clone(), a);
            }
            reports.push(c.finish("algebras", name));
        }

        for (name, entry) in &doc.functionals {
            let mut c = Checker::new();
            let alg = c.step("algebra reference", || {
                algebra_ref(&ws.algebras, &entry.algebra).cloned()
            });
            let density = c.step("matrix shapes", || {
                let h = document::blocks_from_json(&entry.density)?;
                alg.as_ref()
                    .expect("resolved")
                    .check_element(&h)
                    .map_err(|e| e.to_string())?;
                Ok(h)
            });
            let phi = c.step("positive", || {
                functional_from_density(alg.as_ref().expect("resolved"), density.expect("resolved"))
                    .map_err(|e| e.to_string())
            });
            if let Some(phi) = phi {
                ws.functionals.insert(name.clone(), phi);
                ws.algebra_names
                    .insert(("functionals".into(), name.clone()), entry.algebra.clone());
            }
            reports.push(c.finish("functionals", name));
        }

        for (name, entry) in &doc.vectors {
            let mut c = Checker::new();
            if let Some(v) = c.step("matrix shapes", || {
                document::blocks_from_json(&entry.blocks)
            }) {
                ws.vectors.insert(name.clone(), v);
            }
            reports.push(c.finish("vectors", name));
        }

        for (name, entry) in &doc.modules {
            let mut c = Checker::new();
            let alg = c.step("algebra reference", || {
                algebra_ref(&ws.algebras, &entry.algebra).cloned()
            });
            let class = c.step("one multiplicity per block", || {
                ModuleClass::new(
                    alg.as_ref().expect("resolved"),
                    entry.side.into(),
                    entry.multiplicities.iter().map(|m| m.0).collect(),
                )
                .map_err(|e| e.to_string())
            });
            if let Some(class) = class {
                ws.modules.insert(name.clone(), class);
                ws.algebra_names
                    .insert(("modules".into(), name.clone()), entry.algebra.clone());
            }
            reports.push(c.finish("modules", name));
        }

        for (name, entry) in &doc.representations {
            let mut c = Checker::new();
            let alg = c.step("algebra reference", || {
                algebra_ref(&ws.algebras, &entry.algebra).cloned()
            });
            let images = c.step("matrix shapes", || {
                entry
                    .images
                    .iter()
                    .map(|block| block.iter().map(document::matrix_from_json).collect())
                    .collect::<Result<Vec<Vec<_>>, _>>()
            });
            let rep = c.step("matrix-unit relations", || {
                Representation::new(
                    alg.as_ref().expect("resolved"),
                    entry.dim,
                    images.expect("resolved"),
                )
                .map_err(|e| e.to_string())
            });
            if let Some(rep) = rep {
                ws.representations.insert(name.clone(), rep);
                ws.algebra_names.insert(
                    ("representations".into(), name.clone()),
                    entry.algebra.clone(),
                );
            }
            reports.push(c.finish("representations", name));
        }

        for (name, entry) in &doc.bimodules {
            let mut c = Checker::new();
            let algs = c.step("algebra references", || {
                Ok((
                    algebra_ref(&ws.algebras, &entry.left)?.clone(),
                    algebra_ref(&ws.algebras, &entry.right)?.clone(),
                ))
            });
            let bim = c.step("matrix shape", || {
                let (l, r) = algs.as_ref().expect("resolved");
                BimoduleMatrix::new(l, r, int_matrix(&entry.matrix)?).map_err(|e| e.to_string())
            });
            if let Some(b) = bim {
                ws.bimodules.insert(name.clone(), b);
            }
            reports.push(c.finish("bimodules", name));
        }

        for (name, entry) in &doc.inclusions {
            let mut c = Checker::new();
            let algs = c.step("algebra references", || {
                Ok((
                    algebra_ref(&ws.algebras, &entry.sub)?.clone(),
                    algebra_ref(&ws.algebras, &entry.ambient)?.clone(),
                ))
            });
            let inc = c.step("unital inclusion", || {
                let (sub, amb) = algs.as_ref().expect("resolved");
                Inclusion::new(sub, amb, int_matrix(&entry.lambda)?).map_err(|e| e.to_string())
            });
            if let Some(inc) = inc {
                ws.inclusions.insert(name.clone(), inc);
            }
            reports.push(c.finish("inclusions", name));
        }

        (ws, reports)
    }

    /// Name of the algebra an object refers to.
    pub fn algebra_of(&self, category: &str, name: &str) -> Option<&str> {
        self.algebra_names
            .get(&(category.to_string(), name.to_string()))
            .map(String::as_str)
    }
}
