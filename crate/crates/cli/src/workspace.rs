//! Line-oriented workspace files declaring a domain, named unary
//! relations, named crosses, and named relation sets.

use core::fmt;
use core::str::SplitWhitespace;

use crosses_core::patterns::MAX_DIMENSION;
use crosses_core::relations::{Cross, Domain, ElemSet, Language};

/// A failed parse, pointing at the offending input line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    /// 1-based line number; 0 when the file as a whole is at fault.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// A parsed workspace: a language plus named crosses and relation sets.
#[derive(Clone, Debug)]
pub struct Workspace {
    language: Language,
    crosses: Vec<(String, Cross)>,
    sets: Vec<(String, Vec<String>)>,
}

impl Workspace {
    pub fn language(&self) -> &Language {
        &self.language
    }

    /// Looks up a cross by its declared name.
    pub fn cross(&self, name: &str) -> Option<&Cross> {
        self.crosses
            .iter()
            .find(|(declared, _)| declared == name)
            .map(|(_, cross)| cross)
    }

    /// Returns the member crosses of a named set, in declaration order.
    pub fn set(&self, name: &str) -> Option<Vec<Cross>> {
        let (_, members) = self.sets.iter().find(|(declared, _)| declared == name)?;
        Some(
            members
                .iter()
                .map(|member| {
                    self.cross(member)
                        .expect("set members are resolved at parse time")
                        .clone()
                })
                .collect(),
        )
    }
}

struct Pending {
    name: String,
    parts: Vec<String>,
    line: usize,
}

fn fail(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn name_and_body(
    number: usize,
    mut tokens: SplitWhitespace<'_>,
) -> Result<(String, Vec<String>), ParseError> {
    let name = tokens
        .next()
        .ok_or_else(|| fail(number, "expected a name"))?;
    match tokens.next() {
        Some("=") => {}
        _ => return Err(fail(number, format!("expected = after {name}"))),
    }
    Ok((name.to_string(), tokens.map(str::to_string).collect()))
}

fn parse_set_body(number: usize, body: &str) -> Result<Vec<usize>, ParseError> {
    let inner = body
        .trim()
        .strip_prefix('{')
        .and_then(|rest| rest.strip_suffix('}'))
        .ok_or_else(|| fail(number, "expected an element set in braces"))?
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|piece| {
            let piece = piece.trim();
            piece
                .parse::<usize>()
                .map_err(|_| fail(number, format!("{piece} is not an element")))
        })
        .collect()
}

/// Parses workspace text into a resolved workspace.
///
/// Lines hold one declaration each: `domain <size>` once and first,
/// `gamma <name> = { <elements> }`, `cross <name> = <gamma names>`, and
/// `set <name> = <cross names>`. Blank lines are skipped and `#` starts a
/// comment. Crosses and sets may reference names declared later.
pub fn parse_workspace(text: &str) -> Result<Workspace, ParseError> {
    let mut domain: Option<Domain> = None;
    let mut gammas: Vec<(String, ElemSet)> = Vec::new();
    let mut crosses: Vec<Pending> = Vec::new();
    let mut sets: Vec<Pending> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let number = index + 1;
        let line = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        let mut tokens = line.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        match head {
            "domain" => {
                if domain.is_some() {
                    return Err(fail(number, "domain is declared twice"));
                }
                let token = tokens
                    .next()
                    .ok_or_else(|| fail(number, "expected a domain size"))?;
                let size: usize = token
                    .parse()
                    .map_err(|_| fail(number, format!("{token} is not a domain size")))?;
                if tokens.next().is_some() {
                    return Err(fail(number, "unexpected text after the domain size"));
                }
                domain = Some(Domain::new(size).map_err(|e| fail(number, e.to_string()))?);
            }
            "gamma" => {
                let domain =
                    domain.ok_or_else(|| fail(number, "domain must be declared before gamma"))?;
                let (name, parts) = name_and_body(number, tokens)?;
                let elements = parse_set_body(number, &parts.join(" "))?;
                for &element in &elements {
                    if element >= domain.size() {
                        return Err(fail(
                            number,
                            format!(
                                "element {element} is out of range for domain size {}",
                                domain.size()
                            ),
                        ));
                    }
                }
                if gammas.iter().any(|(declared, _)| *declared == name) {
                    return Err(fail(number, format!("gamma {name} is declared twice")));
                }
                let set =
                    ElemSet::from_elements(domain, elements).map_err(|e| fail(number, e.to_string()))?;
                if let Some((other, _)) = gammas.iter().find(|(_, declared)| *declared == set) {
                    return Err(fail(
                        number,
                        format!("gamma {name} has the same extension as {other}"),
                    ));
                }
                if gammas.len() == MAX_DIMENSION {
                    return Err(fail(
                        number,
                        format!("a language holds at most {MAX_DIMENSION} gammas"),
                    ));
                }
                gammas.push((name, set));
            }
            "cross" => {
                let (name, parts) = name_and_body(number, tokens)?;
                if parts.is_empty() {
                    return Err(fail(number, "a cross needs at least one parameter"));
                }
                if crosses.iter().any(|pending| pending.name == name) {
                    return Err(fail(number, format!("cross {name} is declared twice")));
                }
                crosses.push(Pending {
                    name,
                    parts,
                    line: number,
                });
            }
            "set" => {
                let (name, parts) = name_and_body(number, tokens)?;
                if parts.is_empty() {
                    return Err(fail(number, "a set needs at least one cross"));
                }
                if sets.iter().any(|pending| pending.name == name) {
                    return Err(fail(number, format!("set {name} is declared twice")));
                }
                sets.push(Pending {
                    name,
                    parts,
                    line: number,
                });
            }
            other => return Err(fail(number, format!("unrecognized directive {other}"))),
        }
    }

    let domain = domain.ok_or_else(|| fail(0, "the workspace declares no domain"))?;
    let language = Language::new(domain, gammas).map_err(|e| fail(0, e.to_string()))?;

    let mut named_crosses: Vec<(String, Cross)> = Vec::new();
    for pending in crosses {
        let params = pending
            .parts
            .iter()
            .map(|part| {
                language
                    .index_of_name(part)
                    .ok_or_else(|| fail(pending.line, format!("unknown gamma {part}")))
            })
            .collect::<Result<Vec<usize>, ParseError>>()?;
        let cross =
            Cross::new(&language, params).map_err(|e| fail(pending.line, e.to_string()))?;
        named_crosses.push((pending.name, cross));
    }

    let mut named_sets: Vec<(String, Vec<String>)> = Vec::new();
    for pending in sets {
        for member in &pending.parts {
            if !named_crosses.iter().any(|(declared, _)| declared == member) {
                return Err(fail(pending.line, format!("unknown cross {member}")));
            }
        }
        named_sets.push((pending.name, pending.parts));
    }

    Ok(Workspace {
        language,
        crosses: named_crosses,
        sets: named_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
# one distinguished element on a two-element domain
domain 2
gamma g = {1}

cross r1 = g
cross r2 = g g   # the duplicated variant
set q1 = r1
set q2 = r2
set both = r1 r2
";

    #[test]
    fn parses_the_example_workspace() {
        let ws = parse_workspace(EXAMPLE).unwrap();
        assert_eq!(ws.language().domain().size(), 2);
        assert_eq!(ws.language().len(), 1);
        assert_eq!(ws.language().name(0), "g");
        assert_eq!(ws.cross("r2").unwrap().arity(), 2);
        assert_eq!(ws.set("both").unwrap().len(), 2);
        assert!(ws.cross("nope").is_none());
        assert!(ws.set("nope").is_none());
    }

    #[test]
    fn declarations_may_arrive_out_of_order() {
        let ws = parse_workspace("domain 2\nset q = r\ncross r = g\ngamma g = {0}").unwrap();
        assert_eq!(ws.set("q").unwrap().len(), 1);
    }

    #[test]
    fn rejects_out_of_range_elements() {
        let error = parse_workspace("domain 2\ngamma g = {2}").unwrap_err();
        assert_eq!(error.line, 2);
        assert_eq!(
            error.to_string(),
            "line 2: element 2 is out of range for domain size 2"
        );
    }

    #[test]
    fn rejects_a_cross_without_parameters() {
        let error = parse_workspace("domain 2\ngamma g = {1}\ncross r =").unwrap_err();
        assert_eq!(error.line, 3);
        assert_eq!(error.to_string(), "line 3: a cross needs at least one parameter");
    }

    #[test]
    fn rejects_duplicate_gamma_extensions() {
        let error = parse_workspace("domain 2\ngamma a = {1}\ngamma b = { 1 }").unwrap_err();
        assert_eq!(error.to_string(), "line 3: gamma b has the same extension as a");
    }

    #[test]
    fn rejects_duplicate_names_per_kind() {
        let error = parse_workspace("domain 2\ngamma g = {1}\ngamma g = {0}").unwrap_err();
        assert_eq!(error.to_string(), "line 3: gamma g is declared twice");
        let error =
            parse_workspace("domain 2\ngamma g = {1}\ncross r = g\ncross r = g g").unwrap_err();
        assert_eq!(error.to_string(), "line 4: cross r is declared twice");
        let error = parse_workspace("domain 2\ngamma g = {1}\ncross r = g\nset s = r\nset s = r")
            .unwrap_err();
        assert_eq!(error.to_string(), "line 5: set s is declared twice");
    }

    #[test]
    fn rejects_unknown_references() {
        let error = parse_workspace("domain 2\ncross r = g").unwrap_err();
        assert_eq!(error.to_string(), "line 2: unknown gamma g");
        let error = parse_workspace("domain 2\nset s = r").unwrap_err();
        assert_eq!(error.to_string(), "line 2: unknown cross r");
    }

    #[test]
    fn rejects_missing_or_repeated_domains() {
        let error = parse_workspace("gamma g = {1}").unwrap_err();
        assert_eq!(error.to_string(), "line 1: domain must be declared before gamma");
        let error = parse_workspace("# nothing\n").unwrap_err();
        assert_eq!(error.to_string(), "the workspace declares no domain");
        let error = parse_workspace("domain 2\ndomain 3").unwrap_err();
        assert_eq!(error.to_string(), "line 2: domain is declared twice");
        let error = parse_workspace("domain 0").unwrap_err();
        assert_eq!(error.line, 1);
    }

    #[test]
    fn accepts_empty_and_spaced_element_sets() {
        let ws = parse_workspace("domain 2\ngamma none = {}\ngamma both = { 0, 1 }").unwrap();
        assert!(ws.language().gamma(0).is_empty());
        assert_eq!(ws.language().gamma(1).len(), 2);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_workspace("domain two").is_err());
        assert!(parse_workspace("domain 2 3").is_err());
        assert!(parse_workspace("domain 2\ngamma g {1}").is_err());
        assert!(parse_workspace("domain 2\ngamma g = 1").is_err());
        assert!(parse_workspace("domain 2\ngamma g = {1 2}").is_err());
        assert!(parse_workspace("domain 2\ngamma g = {1,}").is_err());
        assert!(parse_workspace("domain 2\nfrobnicate x = y").is_err());
    }
}
