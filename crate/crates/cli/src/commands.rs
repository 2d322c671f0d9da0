//! Command dispatch.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rtp_core::analysis::{
    self, divergence_demo, isometry_pair_demo, EigenvalueRule, NormMethod, IMAGE_TOL,
    NORM_IDENTITY_TOL,
};
use rtp_core::correspondences::{morita_equivalent, BimoduleMatrix};
use rtp_core::gns::gns;
use rtp_core::modules::{decompose, hom_dimension, ExtendedNat, ModuleClass, Side};
use rtp_core::rtp::{change_of_weight, rtp_module_from_classes, rtp_vector};
use rtp_core::MultiMatrixAlgebra;
use serde_json::{json, Map, Value};

use crate::cli::{Command, DemoArgs, Rule};
use crate::document::{self, Document};
use crate::error::{CliError, CliResult};
use crate::workspace::{ObjectReport, Workspace};

/// What a command produced before timing and tolerances are attached.
pub struct Produced {
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    /// Rows for `--csv`.
    pub csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    /// Exit with this error after the record is emitted.
    pub failure: Option<CliError>,
}

impl Produced {
    fn new() -> Self {
        Self {
            inputs: Map::new(),
            outputs: Map::new(),
            csv: None,
            failure: None,
        }
    }

    fn input(&mut self, key: &str, name: &str) {
        self.inputs.insert(key.into(), Value::String(name.into()));
    }

    fn output(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.into(), value);
    }
}

pub fn read_document(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

/// Parse and resolve; any invalid object is a validation error.
pub fn load(path: &Path) -> CliResult<Workspace> {
    let doc = read_document(path)?;
    let (ws, reports) = Workspace::resolve(&doc);
    if let Some(bad) = reports.iter().find(|r| !r.pass) {
        let check = bad.checks.iter().find(|c| !c.pass).expect("failing check");
        return Err(CliError::validation(format!(
            "{}.{}: {} ({})",
            bad.category, bad.name, check.detail, check.invariant
        )));
    }
    Ok(ws)
}

/// Names for `count` inputs of one category: all given explicitly, or all
/// omitted when the category holds exactly `count` objects.
fn pick<'a, T>(
    map: &'a BTreeMap<String, T>,
    category: &str,
    names: &[&Option<String>],
) -> CliResult<Vec<(String, &'a T)>> {
    let given: Vec<&String> = names.iter().filter_map(|n| n.as_ref()).collect();
    let chosen: Vec<String> = if given.len() == names.len() {
        given.into_iter().cloned().collect()
    } else if given.is_empty() && map.len() == names.len() {
        map.keys().cloned().collect()
    } else {
        return Err(CliError::parse(format!(
            "name the {} input(s) from '{category}' explicitly ({} available)",
            names.len(),
            map.len()
        )));
    };
    chosen
        .into_iter()
        .map(|n| match map.get(&n) {
            Some(v) => Ok((n, v)),
            None => Err(CliError::parse(format!("no object '{n}' in '{category}'"))),
        })
        .collect()
}

fn pick_one<'a, T>(
    map: &'a BTreeMap<String, T>,
    category: &str,
    name: &Option<String>,
) -> CliResult<(String, &'a T)> {
    Ok(pick(map, category, &[name])?.remove(0))
}

fn ext_json(m: ExtendedNat) -> Value {
    match m {
        ExtendedNat::Finite(n) => json!(n),
        ExtendedNat::Infinite => json!("inf"),
    }
}

fn class_json(c: &ModuleClass) -> Value {
    Value::Array(c.multiplicities().iter().map(|&m| ext_json(m)).collect())
}

fn algebra_name(ws: &Workspace, alg: &MultiMatrixAlgebra) -> Value {
    ws.algebras
        .iter()
        .find(|(_, a)| *a == alg)
        .map_or(Value::Null, |(n, _)| Value::String(n.clone()))
}

fn bimodule_json(ws: &Workspace, b: &BimoduleMatrix) -> Value {
    json!({
        "left": algebra_name(ws, b.left()),
        "right": algebra_name(ws, b.right()),
        "left_blocks": b.left().blocks(),
        "right_blocks": b.right().blocks(),
        "matrix": b.matrix().to_rows(),
        "dimension": b.dimension(),
    })
}

pub fn execute(command: &Command, norm_tol: f64) -> CliResult<Produced> {
    let mut p = Produced::new();
    match command {
        Command::Gns {
            document,
            functional,
        } => {
            let ws = load(document)?;
            let (name, phi) = pick_one(&ws.functionals, "functionals", functional)?;
            p.input("functional", &name);
            let g = gns(phi);
            let alg = phi.algebra();
            let units = alg.matrix_units();
            let mut residual: f64 = 0.0;
            for &(k, i, j) in &units {
                for &(l, a, b) in &units {
                    residual = residual.max(g.gns_identity_residual(
                        &alg.matrix_unit(k, i, j),
                        &alg.matrix_unit(l, a, b),
                    )?);
                }
            }
            p.output("dimension", json!(g.dimension()));
            p.output("support_ranks", json!(phi.support_ranks()));
            p.output("faithful", json!(phi.is_faithful()));
            p.output("separating", json!(g.is_separating()));
            p.output("identity_residual", json!(residual));
            p.output(
                "cyclic_vector",
                json!(document::blocks_to_json(g.cyclic_vector())),
            );
        }
        Command::Decompose {
            document,
            representation,
        } => {
            let ws = load(document)?;
            let (name, rep) = pick_one(&ws.representations, "representations", representation)?;
            p.input("representation", &name);
            let d = decompose(rep)?;
            p.output("multiplicities", class_json(&d.class));
            p.output("dimension", json!(rep.dim()));
            p.output("residual", json!(d.residual));
            p.output(
                "intertwiner",
                json!(document::matrix_to_json(&d.intertwiner)),
            );
            if d.residual > norm_tol {
                p.failure = Some(CliError::tolerance(format!(
                    "intertwiner residual {:e} exceeds {norm_tol:e}",
                    d.residual
                )));
            }
        }
        Command::HomDim { document, a, b } => {
            let ws = load(document)?;
            let picked = pick(&ws.modules, "modules", &[a, b])?;
            p.input("a", &picked[0].0);
            p.input("b", &picked[1].0);
            p.output(
                "dimension",
                ext_json(hom_dimension(picked[0].1, picked[1].1)?),
            );
        }
        Command::RtpVector {
            document,
            functional,
            xi,
            eta,
        } => {
            let ws = load(document)?;
            let (fname, phi) = pick_one(&ws.functionals, "functionals", functional)?;
            let vs = pick(&ws.vectors, "vectors", &[xi, eta])?;
            p.input("functional", &fname);
            p.input("xi", &vs[0].0);
            p.input("eta", &vs[1].0);
            let v = rtp_vector(phi, vs[0].1, vs[1].1)?;
            p.output("norm", json!(v.hs_norm()));
            p.output("vector", json!(document::blocks_to_json(&v)));
        }
        Command::RtpModule {
            document,
            h,
            k,
            functional,
        } => {
            let ws = load(document)?;
            let (hname, kname) = match (h, k) {
                (Some(h), Some(k)) => (h.clone(), k.clone()),
                (None, None) => {
                    let side = |s: Side| {
                        let names: Vec<&String> = ws
                            .modules
                            .iter()
                            .filter(|(_, m)| m.side() == s)
                            .map(|(n, _)| n)
                            .collect();
                        match names.as_slice() {
                            [one] => Ok((*one).clone()),
                            _ => Err(CliError::parse(format!(
                                "name the modules explicitly: {} {s} modules available",
                                names.len()
                            ))),
                        }
                    };
                    (side(Side::Right)?, side(Side::Left)?)
                }
                _ => return Err(CliError::parse("give both H and K, or neither")),
            };
            let hm = pick_one(&ws.modules, "modules", &Some(hname))?;
            let km = pick_one(&ws.modules, "modules", &Some(kname))?;
            let (fname, phi) = pick_one(&ws.functionals, "functionals", functional)?;
            p.input("h", &hm.0);
            p.input("k", &km.0);
            p.input("functional", &fname);
            let space = rtp_module_from_classes(hm.1, km.1, phi)?;
            p.output("dimension", json!(space.dimension()));
            p.output("expected_dimension", json!(space.expected_dimension()));
            p.output("restricted", json!(space.is_restricted()));
            if space.dimension() != space.expected_dimension() {
                p.failure = Some(CliError::tolerance(format!(
                    "span rank {} differs from Σ r_k m_k = {}",
                    space.dimension(),
                    space.expected_dimension()
                )));
            }
        }
        Command::Cocycle { document, phi, psi } => {
            let ws = load(document)?;
            let fs = pick(&ws.functionals, "functionals", &[phi, psi])?;
            p.input("phi", &fs[0].0);
            p.input("psi", &fs[1].0);
            let c = change_of_weight(fs[0].1, fs[1].1)?;
            p.output("hermitian", json!(c.is_hermitian(1e-10)));
            p.output("element", json!(document::blocks_to_json(c.element())));
        }
        Command::Compose { document, a, b } => {
            let ws = load(document)?;
            let bs = pick(&ws.bimodules, "bimodules", &[a, b])?;
            p.input("a", &bs[0].0);
            p.input("b", &bs[1].0);
            let c = bs[0].1.compose(bs[1].1)?;
            p.output("bimodule", bimodule_json(&ws, &c));
        }
        Command::Contragredient { document, bimodule } => {
            let ws = load(document)?;
            let (name, b) = pick_one(&ws.bimodules, "bimodules", bimodule)?;
            p.input("bimodule", &name);
            p.output("bimodule", bimodule_json(&ws, &b.contragredient()));
        }
        Command::Morita { document, m, n } => {
            let ws = load(document)?;
            let algs = pick(&ws.algebras, "algebras", &[m, n])?;
            p.input("m", &algs[0].0);
            p.input("n", &algs[1].0);
            let d = morita_equivalent(algs[0].1, algs[1].1);
            p.output("equivalent", json!(d.equivalent));
            p.output(
                "witness",
                d.witness
                    .as_ref()
                    .map_or(Value::Null, |w| bimodule_json(&ws, w)),
            );
        }
        Command::Index {
            document,
            inclusion,
        } => {
            let ws = load(document)?;
            let (name, inc) = pick_one(&ws.inclusions, "inclusions", inclusion)?;
            p.input("inclusion", &name);
            p.output("index", json!(inc.index()));
            p.output("morphism", json!(inc.index_morphism().matrix().to_rows()));
        }
        Command::MorphismApply {
            document,
            module,
            bimodule,
            inclusion,
        } => {
            let ws = load(document)?;
            let (label, key, morphism) = match (bimodule, inclusion) {
                (_, Some(_)) => {
                    let (n, inc) = pick_one(&ws.inclusions, "inclusions", inclusion)?;
                    (n, "inclusion", inc.index_morphism())
                }
                (Some(_), None) => {
                    let (n, b) = pick_one(&ws.bimodules, "bimodules", bimodule)?;
                    (n, "bimodule", b.clone())
                }
                (None, None) if !ws.bimodules.is_empty() || ws.inclusions.is_empty() => {
                    let (n, b) = pick_one(&ws.bimodules, "bimodules", &None)?;
                    (n, "bimodule", b.clone())
                }
                (None, None) => {
                    let (n, inc) = pick_one(&ws.inclusions, "inclusions", &None)?;
                    (n, "inclusion", inc.index_morphism())
                }
            };
            let (mname, class) = pick_one(&ws.modules, "modules", module)?;
            p.input(key, &label);
            p.input("module", &mname);
            let image = morphism.apply(class)?;
            p.output("algebra", algebra_name(&ws, image.algebra()));
            p.output("side", json!(image.side().to_string()));
            p.output("multiplicities", class_json(&image));
        }
        Command::TensorNorm {
            document,
            functional,
        } => {
            let ws = load(document)?;
            let (name, phi) = pick_one(&ws.functionals, "functionals", functional)?;
            p.input("functional", &name);
            let r = analysis::tensor_map_norm(phi)?;
            p.output("measured", json!(r.measured));
            p.output("predicted", json!(r.predicted));
            p.output("residual", json!(r.residual));
            p.output("relative_error", json!(r.relative_error()));
            p.output("map_shape", json!([r.map_shape.0, r.map_shape.1]));
            p.output(
                "method",
                json!(match r.method {
                    NormMethod::Assembled => "assembled",
                    NormMethod::MatrixFree => "matrix-free",
                }),
            );
            if r.relative_error() > norm_tol {
                p.failure = Some(CliError::tolerance(format!(
                    "measured norm {} deviates from predicted {} by {:e} (relative)",
                    r.measured,
                    r.predicted,
                    r.relative_error()
                )));
            }
        }
        Command::BilinearNorm {
            document,
            functional,
        } => {
            let ws = load(document)?;
            let (name, phi) = pick_one(&ws.functionals, "functionals", functional)?;
            p.input("functional", &name);
            let r = analysis::bilinear_map_norm(phi)?;
            p.output("norm", json!(r.value()));
            p.output("analytic", json!(r.analytic));
            p.output("optimized", json!(r.optimized));
            if (r.optimized - r.analytic).abs() > norm_tol * r.analytic {
                p.failure = Some(CliError::tolerance(
                    "rank-one optimum disagrees with λ_min^(-1/2)",
                ));
            }
        }
        Command::DivergenceDemo(args) => divergence(&mut p, args)?,
        Command::IsometryDemo(args) => isometry(&mut p, args)?,
        Command::Validate { document } => {
            let doc = read_document(document)?;
            p.input("document", &document.display().to_string());
            let (_, reports) = Workspace::resolve(&doc);
            validation_outputs(&mut p, &reports);
        }
    }
    Ok(p)
}

fn validation_outputs(p: &mut Produced, reports: &[ObjectReport]) {
    let all = reports.iter().all(|r| r.pass);
    p.output("all_pass", json!(all));
    p.output(
        "objects",
        serde_json::to_value(reports).expect("reports serialize"),
    );
    if !all {
        let n = reports.iter().filter(|r| !r.pass).count();
        p.failure = Some(CliError::validation(format!(
            "{n} object(s) failed validation"
        )));
    }
}

const FINITE_SHADOW: &str = "finite shadow: per-k values are certified at this truncation; \
unboundedness and non-preclosedness of the limit are not computed here";

fn demo_params(args: &DemoArgs, rule: EigenvalueRule, n: usize, k: usize) -> (Rule, usize, usize) {
    let rule = args.rule.clone().unwrap_or(Rule(rule));
    let n = args.n.unwrap_or(n);
    let k = args.k_max.unwrap_or(k.min(n));
    (rule, n, k)
}

fn divergence(p: &mut Produced, args: &DemoArgs) -> CliResult<()> {
    let (rule, n, k_max) = demo_params(args, EigenvalueRule::Harmonic, 64, 50);
    p.input("rule", &rule.label());
    let trace = divergence_demo(&rule.0, n, k_max)?;
    let records: Vec<Value> = trace
        .records
        .iter()
        .map(|r| json!({"k": r.k, "s_k": r.s_k, "norm_sq": r.norm_sq, "image_residual": r.image_residual}))
        .collect();
    p.output("truncation", json!(n));
    p.output("k_max", json!(k_max));
    p.output("max_norm_error", json!(trace.max_norm_error()));
    p.output("max_image_residual", json!(trace.max_image_residual()));
    p.output("strictly_decreasing", json!(trace.is_strictly_decreasing()));
    p.output("warning", json!(trace.warning));
    p.output("note", json!(FINITE_SHADOW));
    p.output("records", Value::Array(records));
    p.csv = Some((
        vec!["k", "s_k", "norm_sq", "image_residual"],
        trace
            .records
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.s_k.to_string(),
                    r.norm_sq.to_string(),
                    r.image_residual.to_string(),
                ]
            })
            .collect(),
    ));
    if trace.max_norm_error() > NORM_IDENTITY_TOL || trace.max_image_residual() > IMAGE_TOL {
        p.failure = Some(CliError::tolerance(format!(
            "‖T_k‖² = 1/s_k off by {:e}, image residual {:e}",
            trace.max_norm_error(),
            trace.max_image_residual()
        )));
    }
    Ok(())
}

fn isometry(p: &mut Produced, args: &DemoArgs) -> CliResult<()> {
    let (rule, n, k_max) = demo_params(args, EigenvalueRule::InverseCube, 16, 16);
    p.input("rule", &rule.label());
    let trace = isometry_pair_demo(&rule.0, n, k_max)?;
    let records: Vec<Value> = trace
        .records
        .iter()
        .map(|r| {
            json!({
                "k": r.n,
                "lambda": r.lambda,
                "left_norm_sq": r.left_norm_sq,
                "right_norm_sq": r.right_norm_sq,
                "image_residual": r.image_residual,
            })
        })
        .collect();
    p.output("truncation", json!(n));
    p.output("k_max", json!(k_max));
    p.output("decays", json!(trace.decays));
    p.output("max_image_residual", json!(trace.max_image_residual()));
    p.output("warning", json!(trace.warning));
    p.output("note", json!(FINITE_SHADOW));
    p.output("records", Value::Array(records));
    p.csv = Some((
        vec![
            "k",
            "lambda",
            "left_norm_sq",
            "right_norm_sq",
            "image_residual",
        ],
        trace
            .records
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.lambda.to_string(),
                    r.left_norm_sq.to_string(),
                    r.right_norm_sq.to_string(),
                    r.image_residual.to_string(),
                ]
            })
            .collect(),
    ));
    if trace.max_image_residual() > IMAGE_TOL {
        p.failure = Some(CliError::tolerance(format!(
            "image residual {:e}",
            trace.max_image_residual()
        )));
    }
    Ok(())
}
