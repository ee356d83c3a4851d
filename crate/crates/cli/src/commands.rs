//! Command implementations: each produces a deterministic line-oriented
//! report or a failure carrying the process exit code.

use std::path::Path;

use crosses_core::cloneorder::{
    catalogue, encode, expand_all, pattern_certificate, verify_chain,
};
use crosses_core::downsets::{count_box_downsets, BoundedBox};
use crosses_core::patterns::MAX_DIMENSION;
use crosses_core::polymorph::{clone_leq_bounded, pol_bounded, PreservationViolation};
use crosses_core::relations::{reconstruct_parameters, Cross, Domain, ExtensionalRelation};
use crosses_core::{Budget, Error as CoreError};

use crate::workspace::{parse_workspace, ParseError, Workspace};
use crate::Command;

/// A failed command: the process exit code and a one-line message.
///
/// Code 1 covers usage and input parsing, 2 semantic refusals, and 3
/// exhausted resource budgets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn semantic(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(error: CoreError) -> Failure {
        match error {
            CoreError::BudgetExceeded { .. } => Failure::resource(error.to_string()),
            _ => Failure::semantic(error.to_string()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(error: ParseError) -> Failure {
        Failure::usage(error.to_string())
    }
}

pub(crate) fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Pattern { workspace, cross } => pattern_report(&workspace, &cross),
        Command::Reconstruct { workspace, tuples } => reconstruct_report(&workspace, &tuples),
        Command::Encode { workspace, set } => encode_report(&workspace, &set),
        Command::Compare {
            workspace,
            first,
            second,
            arity,
        } => compare_report(&workspace, &first, &second, arity),
        Command::Pol {
            workspace,
            set,
            arity,
            list,
        } => pol_report(&workspace, &set, arity, list),
        Command::Chain {
            workspace,
            gamma,
            max,
        } => chain_report(&workspace, &gamma, max),
        Command::CountDownsets {
            dims,
            bound,
            oracle,
        } => count_report(dims, bound, oracle),
        Command::Catalogue {
            workspace,
            bound,
            arity,
        } => catalogue_report(&workspace, bound, arity),
    }
}

fn load_workspace(path: &Path) -> Result<Workspace, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_workspace(&text)?)
}

fn named_cross<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Cross, Failure> {
    ws.cross(name)
        .ok_or_else(|| Failure::usage(format!("unknown cross {name}")))
}

fn named_set(ws: &Workspace, name: &str) -> Result<Vec<Cross>, Failure> {
    ws.set(name)
        .ok_or_else(|| Failure::usage(format!("unknown set {name}")))
}

fn checked_arity(arity: usize) -> Result<usize, Failure> {
    if arity == 0 {
        return Err(Failure::usage("arity must be at least 1"));
    }
    Ok(arity)
}

fn pattern_report(path: &Path, name: &str) -> Result<String, Failure> {
    let ws = load_workspace(path)?;
    let cross = named_cross(&ws, name)?;
    let pattern = cross.pattern(ws.language())?;
    Ok(format!("pattern: {pattern}\n"))
}

fn load_tuples(path: &Path, domain: Domain) -> Result<ExtensionalRelation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut arity: Option<usize> = None;
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let number = index + 1;
        let line = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        let mut tuple = Vec::new();
        for token in line.split_whitespace() {
            let element: usize = token
                .parse()
                .map_err(|_| Failure::usage(format!("line {number}: {token} is not an element")))?;
            if element >= domain.size() {
                return Err(Failure::usage(format!(
                    "line {number}: element {element} is out of range for domain size {}",
                    domain.size()
                )));
            }
            tuple.push(element);
        }
        if tuple.is_empty() {
            continue;
        }
        match arity {
            None => arity = Some(tuple.len()),
            Some(expected) if expected != tuple.len() => {
                return Err(Failure::usage(format!(
                    "line {number}: expected {expected} elements, found {}",
                    tuple.len()
                )));
            }
            Some(_) => {}
        }
        tuples.push(tuple);
    }
    let Some(arity) = arity else {
        return Err(Failure::usage("the tuple file holds no tuples"));
    };
    Ok(ExtensionalRelation::new(domain, arity, tuples)?)
}

fn reconstruct_report(path: &Path, tuples: &Path) -> Result<String, Failure> {
    let ws = load_workspace(path)?;
    let relation = load_tuples(tuples, ws.language().domain())?;
    let Some(params) = reconstruct_parameters(ws.language(), &relation)? else {
        return Err(Failure::semantic(
            "the relation is not disjunctively definable over this language",
        ));
    };
    let names: Vec<&str> = params.iter().map(|&p| ws.language().name(p)).collect();
    let pattern = Cross::new(ws.language(), params.clone())?.pattern(ws.language())?;
    Ok(format!(
        "arity: {}\nparameters: {}\npattern: {}\n",
        relation.arity(),
        names.join(" "),
        pattern
    ))
}

fn encode_report(path: &Path, name: &str) -> Result<String, Failure> {
    let ws = load_workspace(path)?;
    let crosses = named_set(&ws, name)?;
    let downset = encode(ws.language(), &crosses)?;
    Ok(format!("encoding: {downset}\n"))
}

fn compare_report(path: &Path, first: &str, second: &str, arity: usize) -> Result<String, Failure> {
    let arity = checked_arity(arity)?;
    let ws = load_workspace(path)?;
    let first = named_set(&ws, first)?;
    let second = named_set(&ws, second)?;
    let verdict = pattern_certificate(ws.language(), &first, &second)?;
    let budget = Budget::default();
    let first_relations = expand_all(ws.language(), &first, &budget)?;
    let second_relations = expand_all(ws.language(), &second, &budget)?;
    let refutation = clone_leq_bounded(
        ws.language().domain(),
        &second_relations,
        &first_relations,
        arity,
        &budget,
    )?;
    let brute = match refutation {
        None => "counterexample-free".to_string(),
        Some(op) => format!("refuted by {op}"),
    };
    Ok(format!("pattern: {verdict}\nbrute-force(k={arity}): {brute}\n"))
}

fn pol_report(path: &Path, name: &str, arity: usize, list: bool) -> Result<String, Failure> {
    let arity = checked_arity(arity)?;
    let ws = load_workspace(path)?;
    let crosses = named_set(&ws, name)?;
    let budget = Budget::default();
    let relations = expand_all(ws.language(), &crosses, &budget)?;
    let clone = pol_bounded(ws.language().domain(), &relations, arity, &budget)?;
    let mut out = String::new();
    for n in 1..=arity {
        out.push_str(&format!("pol({n}): {}\n", clone.count(n)));
        if list {
            for op in clone.arity_ops(n) {
                out.push_str(&format!("op: {op}\n"));
            }
        }
    }
    Ok(out)
}

fn render_tuple(tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn render_violation(violation: &PreservationViolation) -> String {
    let rows: Vec<String> = violation.selection.iter().map(|row| render_tuple(row)).collect();
    format!("({})->{}", rows.join(","), render_tuple(&violation.image))
}

fn chain_report(path: &Path, name: &str, max: usize) -> Result<String, Failure> {
    let ws = load_workspace(path)?;
    let index = ws
        .language()
        .index_of_name(name)
        .ok_or_else(|| Failure::usage(format!("unknown gamma {name}")))?;
    let budget = Budget::default();
    let report = verify_chain(ws.language(), index, max, &budget)?;
    let mut out = format!("gamma: {name}\nzero: {}\none: {}\n", report.zero, report.one);
    for separation in &report.separations {
        out.push_str(&format!(
            "separation(m={}): pass witness={} violation={}\n",
            separation.level,
            separation.witness.table,
            render_violation(&separation.violation)
        ));
    }
    out.push_str(&format!("separations: {}\n", report.separations.len()));
    Ok(out)
}

const ORACLE_LIMIT: usize = 16;

fn subset_oracle(bx: BoundedBox) -> usize {
    let elements = bx.elements();
    let n = elements.len();
    let below: Vec<Vec<bool>> = elements
        .iter()
        .map(|x| elements.iter().map(|y| x.below(y)).collect())
        .collect();
    (0u32..(1u32 << n))
        .filter(|mask| {
            (0..n).all(|j| {
                mask & (1 << j) == 0 || (0..n).all(|i| !below[i][j] || mask & (1 << i) != 0)
            })
        })
        .count()
}

fn count_report(dims: usize, bound: usize, oracle: bool) -> Result<String, Failure> {
    if dims > MAX_DIMENSION {
        return Err(Failure::usage(format!(
            "dimension must be at most {MAX_DIMENSION}"
        )));
    }
    let bx = BoundedBox::new(dims, bound);
    let budget = Budget::default();
    let count = count_box_downsets(bx, &budget)?;
    let mut out = format!("count: {count}\n");
    if oracle {
        match bx.element_count() {
            Some(size) if size <= ORACLE_LIMIT as u128 => {}
            _ => {
                return Err(Failure::resource(format!(
                    "the subset oracle handles boxes with at most {ORACLE_LIMIT} elements"
                )));
            }
        }
        let oracle_count = subset_oracle(bx);
        out.push_str(&format!("oracle: {oracle_count}\n"));
        out.push_str(&format!(
            "agree: {}\n",
            if oracle_count as u128 == count { "yes" } else { "no" }
        ));
    }
    Ok(out)
}

fn catalogue_report(path: &Path, bound: usize, arity: usize) -> Result<String, Failure> {
    let arity = checked_arity(arity)?;
    let ws = load_workspace(path)?;
    let budget = Budget::default();
    let survey = catalogue(ws.language(), bound, arity, &budget)?;
    let signatures = survey.distinct_signatures();
    let verdict = if signatures <= survey.box_downsets {
        "pass"
    } else {
        "fail"
    };
    Ok(format!(
        "downsets: {}\nrepresented: {}\nskipped: {}\nsignatures: {}\ninequality: {}\n",
        survey.box_downsets,
        survey.entries.len(),
        survey.skipped,
        signatures,
        verdict
    ))
}
