//! Command dispatch: load a model, run the requested verification, emit a
//! report.
//!
//! Input problems (bad files, unknown builtins, missing flags) surface as
//! [`CliError`] and exit with code 2. A report whose checks fail exits with
//! code 1. Everything an exit code depends on is recomputed from the report
//! itself, so text and JSON runs agree.

use std::collections::BTreeMap;
use std::path::Path;

use num::Zero;
use thiserror::Error;

use loopcalc::builtins::MODEL_NAMES;
use loopcalc::cartan::{
    cartan_formula_check, cartan_operators, chain_map_check, gamma1_class,
    gamma1_property_check, make_cocycle, weight_shift_check, CartanError, DerivationCocycle,
};
use loopcalc::cdga::CdgaError;
use loopcalc::check::Check;
use loopcalc::gca::Derivation;
use loopcalc::loopmodel::{HodgeTable, LoopError, LoopModel};
use loopcalc::stringbv::{builtin_bv, crosscheck_additive, BvAlgebra, BvError};
use loopcalc::Q;

use crate::parser::{self, ParseError, PresentationFile};
use crate::report::{Report, Section, Table};

pub const ASSUMPTION_DELTA: &str = "the rotation operator on cohomology is modeled by the map \
induced by the suspension derivation s; BV-operator statements are verified at that model level";
pub const ASSUMPTION_UNIT: &str = "the constant-loop map is modeled by the retraction that kills \
barred generators; the unit homology class is its transpose applied to the dual of the top class";

const BUILTIN_FILES: &[(&str, &str)] = &[
    ("s2", include_str!("../builtins/s2.loop")),
    ("s3", include_str!("../builtins/s3.loop")),
    ("s5", include_str!("../builtins/s5.loop")),
    ("s7", include_str!("../builtins/s7.loop")),
    ("cp2", include_str!("../builtins/cp2.loop")),
    ("cp3", include_str!("../builtins/cp3.loop")),
];

pub fn builtin_presentation(name: &str) -> Option<&'static str> {
    BUILTIN_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Betti,
    Hodge,
    CartanVerify,
    Gamma1,
    BvVerify,
    Crosscheck,
    Report,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Betti => "betti",
            CommandKind::Hodge => "hodge",
            CommandKind::CartanVerify => "cartan-verify",
            CommandKind::Gamma1 => "gamma1",
            CommandKind::BvVerify => "bv-verify",
            CommandKind::Crosscheck => "crosscheck",
            CommandKind::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub command: CommandKind,
    pub model: String,
    pub max_degree: usize,
    pub cocycle: Option<String>,
    pub k: u32,
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("unknown builtin `{0}`; available: s2, s3, s5, s7, cp2, cp3")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("invalid model: {0}")]
    Model(#[from] CdgaError),
    #[error("invalid model: {0}")]
    Loop(#[from] LoopError),
    #[error("invalid cocycle: {0}")]
    Cocycle(#[from] CartanError),
    #[error("invalid bv presentation: {0}")]
    Bv(#[from] BvError),
    #[error("command `{command}` needs --cocycle; available labels: {available}")]
    CocycleRequired { command: String, available: String },
    #[error("no cocycle labelled `{label}`; available labels: {available}")]
    UnknownCocycle { label: String, available: String },
    #[error("no bv presentation for model `{0}`")]
    NoBvPresentation(String),
    #[error("model `{0}` declares no formal dimension (`dim` line)")]
    MissingDim(String),
}

struct Loaded {
    label: String,
    file: PresentationFile,
    lm: LoopModel,
    cocycles: BTreeMap<String, DerivationCocycle>,
    bv: Option<BvAlgebra>,
}

fn load(config: &Config) -> Result<Loaded, CliError> {
    let (label, text) = if let Some(name) = config.model.strip_prefix("builtin:") {
        if !MODEL_NAMES.contains(&name) {
            return Err(CliError::UnknownBuiltin(name.to_string()));
        }
        let text = builtin_presentation(name).expect("embedded presentation");
        (config.model.clone(), text.to_string())
    } else {
        let path = Path::new(&config.model);
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: config.model.clone(),
            message: e.to_string(),
        })?;
        (config.model.clone(), text)
    };
    let file = parser::parse(&text)?;

    let cutoff = config.max_degree + 2;
    let d = Derivation::new(&file.algebra, 1, file.differentials.clone())
        .map_err(CdgaError::from)?;
    let model = loopcalc::cdga::SullivanModel::new(
        file.algebra.clone(),
        d,
        file.dim.unwrap_or(0),
        cutoff,
    )?;
    let lm = LoopModel::build(model, cutoff)?;

    let mut cocycles = BTreeMap::new();
    for stanza in &file.cocycles {
        let cocycle = make_cocycle(&lm.base, stanza.values.clone(), stanza.n)?;
        cocycles.insert(stanza.label.clone(), cocycle);
    }

    let bv = if let Some(bv) = &file.bv {
        Some(bv.clone())
    } else if let Some(name) = config.model.strip_prefix("builtin:") {
        match builtin_bv(name, config.max_degree as i64) {
            Ok(algebra) => Some(algebra),
            Err(BvError::UnknownBuiltin(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    Ok(Loaded {
        label,
        file,
        lm,
        cocycles,
        bv,
    })
}

fn resolve_cocycle<'a>(
    config: &Config,
    loaded: &'a Loaded,
) -> Result<(String, &'a DerivationCocycle), CliError> {
    let available = || {
        let labels: Vec<&str> = loaded.cocycles.keys().map(String::as_str).collect();
        if labels.is_empty() {
            "none".to_string()
        } else {
            labels.join(", ")
        }
    };
    let label = config
        .cocycle
        .clone()
        .ok_or_else(|| CliError::CocycleRequired {
            command: config.command.name().to_string(),
            available: available(),
        })?;
    let cocycle = loaded
        .cocycles
        .get(&label)
        .ok_or_else(|| CliError::UnknownCocycle {
            label: label.clone(),
            available: available(),
        })?;
    Ok((label, cocycle))
}

fn format_q(q: &Q) -> String {
    q.to_string()
}

fn model_section(loaded: &Loaded) -> Result<Section, CliError> {
    let lm = &loaded.lm;
    let mut section = Section::new("model");
    let mut table = Table {
        title: "loop model generators".into(),
        columns: vec!["name".into(), "degree".into(), "kind".into()],
        rows: Vec::new(),
    };
    for g in lm.algebra.generators() {
        table.rows.push(vec![
            g.name.clone(),
            g.degree.to_string(),
            if g.is_barred() { "barred" } else { "base" }.to_string(),
        ]);
    }
    section.tables.push(table);
    let validation = lm.base.validation();
    if validation.minimal {
        section.note("the base model is minimal");
    } else {
        section.note(format!(
            "the base model is not minimal; generators with linear differential terms: {}",
            validation.non_minimal_generators.join(", ")
        ));
    }
    section.push_checks(lm.verify_invariants()?);
    Ok(section)
}

fn betti_section(lm: &LoopModel, table: &HodgeTable, pmax: usize) -> Result<Section, CliError> {
    let mut section = Section::new("betti numbers of the loop model");
    let mut t = Table {
        title: "dim H^p".into(),
        columns: vec!["degree".into(), "dim".into()],
        rows: Vec::new(),
    };
    let mut split = Check::new("weight_split_adds_up_to_total_cohomology");
    for p in 0..=pmax {
        let total = table.degree_dim(p);
        t.rows.push(vec![p.to_string(), total.to_string()]);
        let unsplit = lm.betti_unsplit(p)?;
        split.record(total == unsplit, || {
            format!(
                "degree {}: weight blocks give {} but the unsplit complex gives {}",
                p, total, unsplit
            )
        });
    }
    section.tables.push(t);
    section.push_checks([split]);
    Ok(section)
}

fn hodge_section(
    lm: &LoopModel,
    table: &HodgeTable,
    k: u32,
    pmax: usize,
) -> Result<Section, CliError> {
    let mut section = Section::new("hodge decomposition");
    let mut t = Table {
        title: "dim H^p at each weight".into(),
        columns: vec![
            "degree".into(),
            "weight".into(),
            "dim".into(),
            "representatives".into(),
        ],
        rows: Vec::new(),
    };
    for ((p, w), block) in table.blocks() {
        if block.dim() == 0 {
            continue;
        }
        let reps: Vec<String> = block
            .reps
            .iter()
            .map(|r| lm.algebra.format_poly(r))
            .collect();
        t.rows.push(vec![
            p.to_string(),
            w.to_string(),
            block.dim().to_string(),
            reps.join(", "),
        ]);
    }
    section.tables.push(t);
    section.push_checks(lm.phi_k_check(table, k, pmax)?);

    let base_table = lm.base.cohomology_table(pmax)?;
    let mut weight_zero = Check::new("weight_zero_column_matches_base_cohomology");
    for p in 0..=pmax {
        weight_zero.record(table.dim(p, 0) == base_table.dim(p), || {
            format!(
                "degree {}: weight-0 column has dim {} but the base model has {}",
                p,
                table.dim(p, 0),
                base_table.dim(p)
            )
        });
    }
    section.push_checks([weight_zero]);
    Ok(section)
}

fn cartan_section(
    lm: &LoopModel,
    table: &HodgeTable,
    label: &str,
    cocycle: &DerivationCocycle,
    pmax: usize,
) -> Result<Section, CliError> {
    let mut section = Section::new(format!("cartan calculus for cocycle {}", label));
    section.note(format!("cocycle degree -{}", cocycle.n));
    let ops = cartan_operators(lm, table, cocycle)?;
    section.push_checks(cartan_formula_check(lm, table, &ops, pmax)?);
    section.push_checks(chain_map_check(lm, &ops, pmax)?);
    section.push_checks(weight_shift_check(lm, &ops, pmax)?);
    Ok(section)
}

fn gamma1_section(
    lm: &LoopModel,
    table: &HodgeTable,
    label: &str,
    cocycle: &DerivationCocycle,
) -> Result<Section, CliError> {
    let mut section = Section::new(format!("gamma1 class for cocycle {}", label));
    let ops = cartan_operators(lm, table, cocycle)?;
    let unit = lm.unit_homology_vector(table)?;
    let class = gamma1_class(&ops, &unit);
    let mut t = Table {
        title: "class coordinates in the homology dual basis".into(),
        columns: vec![
            "degree".into(),
            "weight".into(),
            "dual of".into(),
            "coefficient".into(),
        ],
        rows: Vec::new(),
    };
    for ((p, w), coords) in &class.coords {
        let block = table.block(*p, *w).expect("class block");
        for (j, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                t.rows.push(vec![
                    p.to_string(),
                    w.to_string(),
                    lm.algebra.format_poly(&block.reps[j]),
                    format_q(c),
                ]);
            }
        }
    }
    section.tables.push(t);
    if class.is_zero() {
        section.note("the class is zero");
    } else {
        let degrees: Vec<String> = class
            .support()
            .iter()
            .map(|(p, w)| format!("degree {} weight {}", p, w))
            .collect();
        section.note(format!("the class is nonzero in {}", degrees.join(", ")));
    }
    let delta = lm.delta_dual(table)?;
    section.push_checks(gamma1_property_check(&class, &delta));
    Ok(section)
}

fn bv_section(bv: &BvAlgebra) -> Result<Section, CliError> {
    let mut section = Section::new(format!("bv presentation {}", bv.name));
    let mut t = Table {
        title: "basis".into(),
        columns: vec!["name".into(), "degree".into(), "weight".into()],
        rows: Vec::new(),
    };
    for e in &bv.elements {
        t.rows.push(vec![
            e.name.clone(),
            e.degree.to_string(),
            e.weight.map_or("-".into(), |w| w.to_string()),
        ]);
    }
    section.tables.push(t);
    section.note(format!(
        "window [{}, {}]",
        bv.window.0, bv.window.1
    ));
    section.push_checks(bv.check_axioms());
    let theorems = bv.theorem_checks()?;
    section.note(format!(
        "weight-one closed candidates: {}",
        if theorems.candidates.is_empty() {
            "none".to_string()
        } else {
            theorems.candidates.join(", ")
        }
    ));
    section.push_checks(theorems.checks);
    Ok(section)
}

fn crosscheck_section(
    bv: &BvAlgebra,
    lm: &LoopModel,
    table: &HodgeTable,
    pmax: usize,
) -> Result<Section, CliError> {
    let mut section = Section::new("additive crosscheck against the loop model");
    let report = crosscheck_additive(bv, lm, table, pmax)?;
    let mut t = Table {
        title: "occupied cells (shifted degree, weight)".into(),
        columns: vec![
            "degree".into(),
            "weight".into(),
            "presentation dim".into(),
            "model dim".into(),
        ],
        rows: Vec::new(),
    };
    for (q, w, a, b) in &report.rows {
        t.rows.push(vec![
            q.to_string(),
            w.to_string(),
            a.to_string(),
            b.to_string(),
        ]);
    }
    section.tables.push(t);
    section.push_checks([report.check]);
    Ok(section)
}

fn presentation_section(file: &PresentationFile) -> Section {
    let mut section = Section::new("presentation");
    section.note(parser::print(file));
    section
}

pub fn run(config: &Config) -> Result<Report, CliError> {
    let loaded = load(config)?;
    let lm = &loaded.lm;
    let pmax = config.max_degree;
    let table = lm.hodge_table(pmax)?;

    let mut assumptions = Vec::new();
    let mut sections = Vec::new();
    match config.command {
        CommandKind::Betti => {
            sections.push(model_section(&loaded)?);
            sections.push(betti_section(lm, &table, pmax)?);
        }
        CommandKind::Hodge => {
            sections.push(model_section(&loaded)?);
            sections.push(hodge_section(lm, &table, config.k, pmax)?);
        }
        CommandKind::CartanVerify => {
            let (label, cocycle) = resolve_cocycle(config, &loaded)?;
            assumptions.push(ASSUMPTION_DELTA.to_string());
            sections.push(model_section(&loaded)?);
            sections.push(cartan_section(lm, &table, &label, cocycle, pmax)?);
        }
        CommandKind::Gamma1 => {
            let (label, cocycle) = resolve_cocycle(config, &loaded)?;
            if loaded.file.dim.is_none() {
                return Err(CliError::MissingDim(loaded.label.clone()));
            }
            assumptions.push(ASSUMPTION_DELTA.to_string());
            assumptions.push(ASSUMPTION_UNIT.to_string());
            sections.push(model_section(&loaded)?);
            sections.push(gamma1_section(lm, &table, &label, cocycle)?);
        }
        CommandKind::BvVerify => {
            let bv = loaded
                .bv
                .as_ref()
                .ok_or_else(|| CliError::NoBvPresentation(loaded.label.clone()))?;
            sections.push(bv_section(bv)?);
        }
        CommandKind::Crosscheck => {
            let bv = loaded
                .bv
                .as_ref()
                .ok_or_else(|| CliError::NoBvPresentation(loaded.label.clone()))?;
            if loaded.file.dim.is_none() {
                return Err(CliError::MissingDim(loaded.label.clone()));
            }
            sections.push(model_section(&loaded)?);
            sections.push(crosscheck_section(bv, lm, &table, pmax)?);
        }
        CommandKind::Report => {
            assumptions.push(ASSUMPTION_DELTA.to_string());
            assumptions.push(ASSUMPTION_UNIT.to_string());
            sections.push(model_section(&loaded)?);
            sections.push(betti_section(lm, &table, pmax)?);
            sections.push(hodge_section(lm, &table, config.k, pmax)?);
            for (label, cocycle) in &loaded.cocycles {
                sections.push(cartan_section(lm, &table, label, cocycle, pmax)?);
                if loaded.file.dim.is_some() {
                    sections.push(gamma1_section(lm, &table, label, cocycle)?);
                }
            }
            if let Some(bv) = &loaded.bv {
                sections.push(bv_section(bv)?);
                if loaded.file.dim.is_some() {
                    sections.push(crosscheck_section(bv, lm, &table, pmax)?);
                }
            }
            sections.push(presentation_section(&loaded.file));
        }
    }

    let mut report = Report {
        tool: "loopcalc".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: config.command.name().to_string(),
        model: loaded.label.clone(),
        max_degree: pmax,
        k: config.k,
        assumptions,
        sections,
        passed: false,
    };
    report.recompute_passed();
    Ok(report)
}

/// Renders a finished report in the requested format.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.render_text(),
        Format::Json => report.render_json(),
    }
}
