use std::path::Path;

use qmonadic::cylindric::{check_cylindric, Mode};
use qmonadic::frames::{check_lemma_r, check_monadic_frame, check_weak_cylindric_frame, closed_set_lattice_limited};
use qmonadic::io::{self, matrix_to_text};
use qmonadic::quantifier::{check_quantifier, find_q6_counterexample, SearchSpace};
use qmonadic::random::seeded;
use qmonadic::report::AxiomCheck;
use qmonadic::vn::{
    build_algebra, central_carrier, check_exists_equals_range_of_expectation, check_pimsner_popa, is_projection,
    search_expectation_gap as gap_search, MAX_MATRIX_DIM,
};
use qmonadic::{FiniteOl, Gq};
use serde::Serialize;
use serde_json::{json, Value};

/// Structural or parse error; exit status 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct Entry {
    pub name: String,
    /// "pass", "fail" or "info" (reported but not required).
    pub status: &'static str,
    pub holds: bool,
    pub witness: Value,
}

pub struct Outcome {
    pub passed: bool,
    pub checks: Vec<Entry>,
    pub lines: Vec<String>,
    pub details: Value,
}

impl Outcome {
    fn from_checks(checks: Vec<Entry>, lines: Vec<String>, details: Value) -> Self {
        let passed = checks.iter().all(|c| c.status != "fail");
        Outcome {
            passed,
            checks,
            lines,
            details,
        }
    }
}

fn entry(name: impl Into<String>, holds: bool, witness: Value) -> Entry {
    Entry {
        name: name.into(),
        status: if holds { "pass" } else { "fail" },
        holds,
        witness,
    }
}

fn info(name: impl Into<String>, holds: bool, witness: Value) -> Entry {
    Entry {
        name: name.into(),
        status: "info",
        holds,
        witness: if holds { Value::Null } else { witness },
    }
}

/// Element witnesses carry indices and labels.
fn elements(l: &FiniteOl, xs: &[usize]) -> Value {
    json!({ "indices": xs, "labels": xs.iter().map(|&x| l.label(x)).collect::<Vec<_>>() })
}

fn axiom_entry(l: &FiniteOl, c: &AxiomCheck) -> Entry {
    entry(c.name.clone(), c.holds, c.witness.as_ref().map_or(Value::Null, |w| elements(l, w)))
}

fn lattice_checks(l: &FiniteOl) -> Vec<Entry> {
    let violations = l.validate_ortholattice();
    let ol = match violations.first() {
        None => entry("ortholattice", true, Value::Null),
        Some(v) => entry(
            "ortholattice",
            false,
            json!({ "axiom": v.axiom, "elements": elements(l, &v.witness) }),
        ),
    };
    let oml = l.check_orthomodular();
    let oml_witness = oml.witness.map_or(Value::Null, |(x, y)| elements(l, &[x, y]));
    vec![ol, entry("orthomodular", oml.is_oml, oml_witness)]
}

fn lattice_summary(l: &FiniteOl) -> (Vec<String>, Value) {
    let center = l.center().count_ones(..);
    let boolean = l.is_ortholattice() && l.is_boolean();
    let lines = vec![format!(
        "{} elements, {} atoms, center of size {}, Boolean: {}",
        l.len(),
        l.atoms().len(),
        center,
        boolean
    )];
    let details = json!({ "elements": l.len(), "atoms": l.atoms().len(), "center": center, "boolean": boolean });
    (lines, details)
}

pub fn lattice(text: &str, json_input: bool, limit: usize) -> Result<Outcome, Failure> {
    let l = if json_input {
        io::parse_lattice(text, limit)?
    } else {
        io::parse_greechie(text, limit)?
    };
    let (lines, details) = lattice_summary(&l);
    Ok(Outcome::from_checks(lattice_checks(&l), lines, details))
}

pub fn quantifier(text: &str, base: Option<&Path>, limit: usize) -> Result<Outcome, Failure> {
    let (l, e) = io::parse_quantifier(text, base, limit)?;
    let mut checks = lattice_checks(&l);
    let report = check_quantifier(&l, &e);
    for c in &report.checks {
        if c.name == "Q6" {
            let w = c.witness.as_ref().map_or(Value::Null, |w| elements(&l, w));
            checks.push(info("Q6", c.holds, w));
        } else {
            checks.push(axiom_entry(&l, c));
        }
    }
    let fixed: Vec<&str> = e
        .image(&l)
        .ones()
        .map(|x| l.label(x))
        .collect();
    let lines = vec![format!("{} elements; image of the map: {{{}}}", l.len(), fixed.join(", "))];
    Ok(Outcome::from_checks(checks, lines, json!({ "image": fixed })))
}

pub fn cylindric(text: &str, base: Option<&Path>, mode: Mode, limit: usize) -> Result<Outcome, Failure> {
    let c = io::parse_cylindric(text, base, limit)?;
    let report = check_cylindric(&c, mode);
    let mut checks = lattice_checks(&c.base);
    checks.extend(report.checks.iter().map(|a| axiom_entry(&c.base, a)));
    let lines = vec![format!("{} elements, {} dimensions", c.base.len(), c.dims())];
    Ok(Outcome::from_checks(checks, lines, json!({ "mode": mode, "dims": c.dims() })))
}

pub fn frame(text: &str, seed: u64, limit: usize) -> Result<Outcome, Failure> {
    let f = io::parse_frame(text)?;
    let mut rng = seeded(seed);
    let closed = closed_set_lattice_limited(&f, limit)?;
    let l = &closed.lattice;
    let mut checks = vec![
        entry("closed-sets-ortholattice", l.is_ortholattice(), Value::Null),
        info("closed-sets-orthomodular", l.is_oml(), Value::Null),
    ];
    let points = |w: &Option<Vec<usize>>| w.as_ref().map_or(Value::Null, |w| json!(w));
    for i in 0..f.relation_count() {
        for c in check_monadic_frame(&f, i)?.checks {
            checks.push(entry(format!("{}[{i}]", c.name), c.holds, points(&c.witness)));
        }
        for c in check_lemma_r(&f, i, &mut rng)?.checks {
            checks.push(entry(format!("{}[{i}]", c.name), c.holds, points(&c.witness)));
        }
    }
    if f.relation_count() > 1 || !f.diagonals().is_empty() {
        let weak = check_weak_cylindric_frame(&f)?;
        for c in &weak.checks {
            if !c.name.starts_with("W1") {
                checks.push(entry(c.name.clone(), c.holds, points(&c.witness)));
            }
        }
        if let Some(complex) = &weak.complex {
            for c in &complex.checks {
                let w = c.witness.as_ref().map_or(Value::Null, |w| elements(l, w));
                checks.push(entry(format!("complex-{}", c.name), c.holds, w));
            }
        }
        if let Some(commute) = weak.quantifiers_commute {
            checks.push(entry("complex-quantifiers-commute", commute, Value::Null));
        }
    }
    let lines = vec![format!(
        "{} points, {} relations, {} closed sets",
        f.len(),
        f.relation_count(),
        l.len()
    )];
    Ok(Outcome::from_checks(
        checks,
        lines,
        json!({ "points": f.len(), "closed_sets": l.len(), "seed": seed }),
    ))
}

pub fn algebra(text: &str) -> Result<Outcome, Failure> {
    let input = io::parse_algebra::<Gq>(text)?;
    let m = build_algebra(input.dim, &input.generators)?;
    let center = m.center();
    let mut checks = Vec::new();
    let n = match &input.subalgebra {
        Some(gens) => {
            let n = build_algebra(input.dim, gens)?;
            checks.push(entry("subalgebra-inclusion", n.le(&m), Value::Null));
            n
        }
        None => m.clone(),
    };
    let mut lines = vec![format!(
        "algebra of dimension {} in M_{}, center of dimension {}, commutant of dimension {}",
        m.algebra_dim(),
        input.dim,
        center.algebra_dim(),
        m.commutant().algebra_dim()
    )];
    if input.subalgebra.is_some() {
        lines.push(format!("subalgebra of dimension {}", n.algebra_dim()));
    }
    let mut rows = Vec::new();
    for (k, p) in input.projections.iter().enumerate() {
        if !is_projection(p) {
            return Err(Failure(format!("projection {k} is not a projection")));
        }
        let check = check_exists_equals_range_of_expectation(&n, p)?;
        let w = json!({
            "exists": matrix_to_text(&check.exists),
            "range_of_expectation": matrix_to_text(&check.range_of_expectation),
            "exists_of_range": matrix_to_text(&check.exists_of_range),
        });
        checks.push(entry(format!("exists-equals-range[{k}]"), check.all_equal(), w.clone()));
        let mut row = json!({ "index": k, "values": w, "expectation": matrix_to_text(&n.expectation(p)) });
        if let Some(lambda) = &input.lambda {
            let pp = check_pimsner_popa(&n, p, lambda);
            checks.push(entry(
                format!("pimsner-popa[{k}]"),
                pp.is_psd(),
                serde_json::to_value(pp.summary()).expect("plain data"),
            ));
        }
        if m.contains(p) {
            row["central_carrier"] = json!(matrix_to_text(&central_carrier(&m, p)?));
        }
        rows.push(row);
    }
    Ok(Outcome::from_checks(
        checks,
        lines,
        json!({
            "dim": input.dim,
            "algebra_dim": m.algebra_dim(),
            "center_dim": center.algebra_dim(),
            "subalgebra_dim": n.algebra_dim(),
            "projections": rows,
        }),
    ))
}

pub fn repro(name: &str, seed: u64) -> Result<Outcome, Failure> {
    let r = qmonadic::scenarios::run(name, seed)?;
    Ok(Outcome {
        passed: r.reproduced,
        checks: vec![entry(format!("repro-{name}"), r.reproduced, Value::Null)],
        lines: r.lines,
        details: r.details,
    })
}

/// Bounds beyond which the searches stop being desk-scale.
pub const MAX_SEARCH_BLOCKS: usize = 5;
pub const MAX_SEARCH_ATOMS: u32 = 5;
pub const MAX_GAP_DIM: usize = 6;

pub fn search_q6(max_blocks: usize, boolean_only: bool, max_atoms: u32) -> Result<Outcome, Failure> {
    let space = if boolean_only {
        if !(1..=MAX_SEARCH_ATOMS).contains(&max_atoms) {
            return Err(Failure(format!("--max-atoms must be in 1..={MAX_SEARCH_ATOMS}")));
        }
        SearchSpace::Boolean { max_atoms }
    } else {
        if !(1..=MAX_SEARCH_BLOCKS).contains(&max_blocks) {
            return Err(Failure(format!("--max-blocks must be in 1..={MAX_SEARCH_BLOCKS}")));
        }
        SearchSpace::Greechie { max_blocks }
    };
    let search = find_q6_counterexample(&space);
    let (lines, details) = match &search.witness {
        Some(w) => {
            let l = &w.lattice;
            let s: Vec<&str> = w.subalgebra.ones().map(|x| l.label(x)).collect();
            let diagram = w.diagram.as_ref().map(|d| d.to_text());
            (
                vec![
                    format!("witness after {} candidates: {} elements", search.examined, l.len()),
                    format!("S = {{{}}}, p = {}, q = {}", s.join(", "), l.label(w.p), l.label(w.q)),
                    format!("∃(p ∧ ∃q) = {}, ∃p ∧ ∃q = {}", l.label(w.lhs()), l.label(w.rhs())),
                ],
                json!({
                    "found": true,
                    "examined": search.examined,
                    "rejected": search.rejected,
                    "diagram": diagram,
                    "lattice": io::LatticeFile::from_lattice(l),
                    "subalgebra": s,
                    "p": l.label(w.p),
                    "q": l.label(w.q),
                }),
            )
        }
        None => (
            vec![format!("no witness; {} candidates examined", search.examined)],
            json!({ "found": false, "examined": search.examined, "rejected": search.rejected }),
        ),
    };
    Ok(Outcome {
        passed: true,
        checks: Vec::new(),
        lines,
        details,
    })
}

pub fn search_expectation_gap(dim: usize, inclusions: usize, projections: usize, seed: u64) -> Result<Outcome, Failure> {
    if !(1..=MAX_GAP_DIM.min(MAX_MATRIX_DIM)).contains(&dim) {
        return Err(Failure(format!("--dim must be in 1..={MAX_GAP_DIM}")));
    }
    if inclusions > 1000 || projections > 100 {
        return Err(Failure("at most 1000 inclusions and 100 projections".into()));
    }
    let mut rng = seeded(seed);
    let records = gap_search::<Gq>(dim, inclusions, projections, &mut rng)?;
    let gaps: usize = records.iter().map(|r| r.gaps).sum();
    let lines = records
        .iter()
        .enumerate()
        .map(|(k, r)| {
            format!(
                "inclusion {k}: subalgebra of dimension {}, {} projections, {} gaps",
                r.algebra_dim, r.projections_tested, r.gaps
            )
        })
        .chain(std::iter::once(format!("total gaps: {gaps}")))
        .collect();
    Ok(Outcome {
        passed: true,
        checks: Vec::new(),
        lines,
        details: json!({ "dim": dim, "seed": seed, "records": records, "gaps": gaps }),
    })
}

pub fn convert(text: &str, output: Option<&Path>, limit: usize) -> Result<Outcome, Failure> {
    let l = io::parse_greechie(text, limit)?;
    let out = io::lattice_to_json(&l);
    let lines = match output {
        Some(path) => {
            std::fs::write(path, out.clone() + "\n")?;
            vec![format!("wrote {} elements to {}", l.len(), path.display())]
        }
        None => vec![out.clone()],
    };
    Ok(Outcome {
        passed: true,
        checks: Vec::new(),
        lines,
        details: serde_json::from_str(&out).expect("valid JSON"),
    })
}
