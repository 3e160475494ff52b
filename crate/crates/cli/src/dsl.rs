//! Rule files.
//!
//! ```text
//! # comment
//! substrate: string
//! alphabet: A B
//! init: AA
//! A -> AB
//! AAB -> ABA @level 1
//! ```
//!
//! Term files may add `vars: x y z`, `signature: g/2 inv/1 e/0` and
//! `precedence: inv > g > e` (greatest first). Rule annotations are
//! `@level k`, `@anchored`, `@free`, `@injective` and `@id name`. Rules of
//! level 0 are free by default, higher levels anchored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use multiway_core::homotopy::RuleTower;
use multiway_core::hypergraph::HypergraphRule;
use multiway_core::rewrite::{Rule, RuleBody, State, Substrate};
use multiway_core::strings::StringRule;
use multiway_core::syntax::{parse_hpattern, parse_hypergraph, parse_string_state, parse_term};
use multiway_core::term::{Term, TermRule, TermState};
use multiway_core::Error as CoreError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: CoreError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFile {
    pub substrate: Substrate,
    /// Declared alphabet, least symbol first.
    pub alphabet: Option<Vec<char>>,
    pub vars: Vec<String>,
    pub signature: Option<BTreeMap<String, usize>>,
    /// Function symbols, greatest first.
    pub precedence: Vec<String>,
    pub initial: Vec<State>,
    pub rules: Vec<Rule>,
}

impl RuleFile {
    pub fn new(substrate: Substrate) -> Self {
        RuleFile {
            substrate,
            alphabet: None,
            vars: Vec::new(),
            signature: None,
            precedence: Vec::new(),
            initial: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn tower(&self) -> RuleTower {
        RuleTower::from_rules(self.rules.clone())
    }

    /// The declared alphabet, or the symbols used, in code-point order.
    pub fn effective_alphabet(&self) -> Vec<char> {
        if let Some(a) = &self.alphabet {
            return a.clone();
        }
        let mut used = BTreeSet::new();
        for r in &self.rules {
            used.extend(r.lhs_text().chars().chain(r.rhs_text().chars()).filter(|c| *c != '"'));
        }
        for s in &self.initial {
            used.extend(s.to_string().chars().filter(|c| *c != '"'));
        }
        used.into_iter().collect()
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> DslError {
    DslError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Lift a core error from parsing a fragment starting at `offset` (0-based
/// character column within the line).
fn lift(line: usize, offset: usize) -> impl Fn(CoreError) -> DslError {
    move |e| match e {
        CoreError::Syntax { column, message } => parse_err(line, offset + column, message),
        other => DslError::Semantic { line, source: other },
    }
}

fn col_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count()
}

/// The trimmed slice `line[start..end]` and its 0-based character column.
fn fragment(line: &str, start: usize, end: usize) -> (&str, usize) {
    let raw = &line[start..end];
    let lead = raw.len() - raw.trim_start().len();
    (raw.trim(), col_of(line, start + lead))
}

struct Annotations {
    level: u32,
    anchored: Option<bool>,
    injective: bool,
    id: Option<String>,
}

fn annotations(line_no: usize, line: &str, start: usize) -> Result<Annotations, DslError> {
    let mut out = Annotations {
        level: 0,
        anchored: None,
        injective: false,
        id: None,
    };
    let text = &line[start..];
    let mut words = text.split_whitespace().peekable();
    let column = |w: &str| col_of(line, start + (w.as_ptr() as usize - text.as_ptr() as usize)) + 1;
    while let Some(w) = words.next() {
        match w {
            "@level" => {
                let v = words
                    .next()
                    .ok_or_else(|| parse_err(line_no, column(w), "expected a level after `@level`"))?;
                out.level = v
                    .parse()
                    .map_err(|_| parse_err(line_no, column(v), format!("`{v}` is not a level")))?;
            }
            "@id" => {
                let v = words
                    .next()
                    .ok_or_else(|| parse_err(line_no, column(w), "expected a name after `@id`"))?;
                out.id = Some(v.to_string());
            }
            "@anchored" => out.anchored = Some(true),
            "@free" => out.anchored = Some(false),
            "@injective" => out.injective = true,
            other => {
                return Err(parse_err(
                    line_no,
                    column(other),
                    format!("unknown annotation `{other}`; expected @level, @id, @anchored, @free or @injective"),
                ))
            }
        }
    }
    Ok(out)
}

struct Parser {
    file: Option<RuleFile>,
    pending_init: Vec<(usize, String, usize)>,
    rule_lines: Vec<usize>,
}

/// Parse a rule file.
pub fn parse_rule_file(text: &str) -> Result<RuleFile, DslError> {
    let mut p = Parser {
        file: None,
        pending_init: Vec::new(),
        rule_lines: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        p.line(line_no, line)?;
    }
    let mut file = p.file.ok_or_else(|| parse_err(1, 1, "missing `substrate:` header"))?;
    let mut init_lines = Vec::new();
    for (line_no, state, offset) in std::mem::take(&mut p.pending_init) {
        let s = parse_state(&file, &state).map_err(lift(line_no, offset))?;
        file.initial.push(s);
        init_lines.push(line_no);
    }
    let lines: Vec<usize> = p.rule_lines.iter().chain(&init_lines).copied().collect();
    check_symbols(&file, &lines)?;
    Ok(file)
}

fn parse_state(file: &RuleFile, text: &str) -> Result<State, CoreError> {
    Ok(match file.substrate {
        Substrate::String => State::String(parse_string_state(text)?),
        Substrate::Hypergraph => State::Hypergraph(parse_hypergraph(text)?),
        Substrate::Term => State::Term(TermState::new(parse_term(text, &BTreeSet::new())?)),
    })
}

const HEADERS: [&str; 6] = ["substrate", "alphabet", "vars", "signature", "precedence", "init"];

impl Parser {
    fn line(&mut self, line_no: usize, line: &str) -> Result<(), DslError> {
        if !line.contains("->") {
            if let Some(k) = line.find(':') {
                let key = line[..k].trim();
                if HEADERS.contains(&key) {
                    let (value, offset) = fragment(line, k + 1, line.len());
                    return self.header(line_no, key, value, offset);
                }
                let (_, c) = fragment(line, 0, k);
                return Err(parse_err(line_no, c + 1, format!("unknown header `{key}`")));
            }
            let (_, c) = fragment(line, 0, line.len());
            return Err(parse_err(
                line_no,
                c + 1,
                "expected a header `key: value` or a rule `lhs -> rhs`",
            ));
        }
        self.rule(line_no, line)
    }

    fn file(&mut self, line_no: usize) -> Result<&mut RuleFile, DslError> {
        self.file
            .as_mut()
            .ok_or_else(|| parse_err(line_no, 1, "`substrate:` must come before other headers and rules"))
    }

    fn header(&mut self, line_no: usize, key: &str, value: &str, offset: usize) -> Result<(), DslError> {
        if key == "substrate" {
            if self.file.is_some() {
                return Err(parse_err(line_no, 1, "duplicate `substrate:` header"));
            }
            let s: Substrate = value.parse().map_err(|_| {
                parse_err(
                    line_no,
                    offset + 1,
                    format!("unknown substrate `{value}`; expected string, hypergraph or term"),
                )
            })?;
            self.file = Some(RuleFile::new(s));
            return Ok(());
        }
        let file = self.file(line_no)?;
        match key {
            "alphabet" => file.alphabet = Some(value.chars().filter(|c| !c.is_whitespace() && *c != ',').collect()),
            "vars" => {
                file.vars = value
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|v| !v.is_empty())
                    .map(String::from)
                    .collect()
            }
            "precedence" => {
                file.precedence = value
                    .split('>')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "signature" => {
                let mut sig = BTreeMap::new();
                for item in value
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|v| !v.is_empty())
                {
                    let (name, arity) = item
                        .split_once('/')
                        .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
                        .ok_or_else(|| {
                            parse_err(line_no, offset + 1, format!("expected `symbol/arity`, found `{item}`"))
                        })?;
                    sig.insert(name.to_string(), arity);
                }
                file.signature = Some(sig);
            }
            _ => {
                self.pending_init.push((line_no, value.to_string(), offset));
            }
        }
        Ok(())
    }

    fn rule(&mut self, line_no: usize, line: &str) -> Result<(), DslError> {
        let arrow = line.find("->").expect("caller checked");
        let rhs_end = line[arrow + 2..].find('@').map_or(line.len(), |k| arrow + 2 + k);
        let (lhs, lhs_col) = fragment(line, 0, arrow);
        let (rhs, rhs_col) = fragment(line, arrow + 2, rhs_end);
        if lhs.is_empty() {
            return Err(parse_err(line_no, lhs_col + 1, "expected a left-hand side before `->`"));
        }
        if rhs.is_empty() {
            return Err(parse_err(
                line_no,
                col_of(line, arrow) + 3,
                "expected a right-hand side after `->`",
            ));
        }
        let ann = annotations(line_no, line, rhs_end)?;
        let file = self.file(line_no)?;
        let id = ann.id.unwrap_or_else(|| format!("r{}", file.rules.len() + 1));
        let anchored = ann.anchored.unwrap_or(ann.level > 0);
        let body = if anchored {
            let l = parse_state(file, lhs).map_err(lift(line_no, lhs_col))?;
            let r = parse_state(file, rhs).map_err(lift(line_no, rhs_col))?;
            Rule::whole(id.clone(), l, r).map_err(lift(line_no, 0))?.body
        } else {
            match file.substrate {
                Substrate::String => {
                    let l = parse_string_state(lhs).map_err(lift(line_no, lhs_col))?;
                    let r = parse_string_state(rhs).map_err(lift(line_no, rhs_col))?;
                    if l.is_empty() {
                        return Err(DslError::Semantic {
                            line: line_no,
                            source: CoreError::EmptyLhs(id),
                        });
                    }
                    RuleBody::String(StringRule::from_symbols(l.symbols, r.symbols))
                }
                Substrate::Hypergraph => RuleBody::Hypergraph(HypergraphRule {
                    lhs: parse_hpattern(lhs).map_err(lift(line_no, lhs_col))?,
                    rhs: parse_hpattern(rhs).map_err(lift(line_no, rhs_col))?,
                    injective: ann.injective,
                }),
                Substrate::Term => {
                    let vars: BTreeSet<String> = file.vars.iter().cloned().collect();
                    let body = TermRule {
                        lhs: parse_term(lhs, &vars).map_err(lift(line_no, lhs_col))?,
                        rhs: parse_term(rhs, &vars).map_err(lift(line_no, rhs_col))?,
                    };
                    body.check_bound(&id).map_err(lift(line_no, 0))?;
                    RuleBody::Term(body)
                }
            }
        };
        if ann.injective && !matches!(body, RuleBody::Hypergraph(_)) {
            return Err(parse_err(
                line_no,
                1,
                "`@injective` applies only to free hypergraph rules",
            ));
        }
        file.rules.push(Rule::new(id, body).with_level(ann.level));
        self.rule_lines.push(line_no);
        Ok(())
    }
}

/// Arity consistency for term files, and membership in the declared
/// alphabet or signature. `lines` gives the source line of each rule, then
/// of each initial state.
fn check_symbols(file: &RuleFile, lines: &[usize]) -> Result<(), DslError> {
    let semantic = |line: usize, source: CoreError| DslError::Semantic { line, source };
    match file.substrate {
        Substrate::String => {
            if let Some(alpha) = &file.alphabet {
                let texts = file
                    .rules
                    .iter()
                    .map(|r| r.lhs_text() + &r.rhs_text())
                    .chain(file.initial.iter().map(|s| s.to_string()));
                for (t, &line) in texts.zip(lines) {
                    if let Some(c) = t.chars().find(|c| *c != '"' && !alpha.contains(c)) {
                        return Err(semantic(line, CoreError::UndeclaredSymbol(c.to_string())));
                    }
                }
            }
        }
        Substrate::Term => {
            let mut seen: BTreeMap<String, usize> = BTreeMap::new();
            let mut first_line: BTreeMap<String, usize> = BTreeMap::new();
            let mut terms: Vec<(&Term, usize)> = Vec::new();
            for (r, &line) in file.rules.iter().zip(lines) {
                match &r.body {
                    RuleBody::Term(t) => terms.extend([(&t.lhs, line), (&t.rhs, line)]),
                    RuleBody::Whole(w) => {
                        for s in [&w.lhs, &w.rhs] {
                            if let State::Term(t) = s {
                                terms.push((&t.term, line));
                            }
                        }
                    }
                    _ => {}
                }
            }
            for (s, &line) in file.initial.iter().zip(&lines[file.rules.len()..]) {
                if let State::Term(t) = s {
                    terms.push((&t.term, line));
                }
            }
            for (t, line) in terms {
                t.signature(&mut seen).map_err(|e| semantic(line, e))?;
                for name in seen.keys() {
                    first_line.entry(name.clone()).or_insert(line);
                }
            }
            if let Some(sig) = &file.signature {
                for (name, &arity) in &seen {
                    let line = first_line[name];
                    match sig.get(name) {
                        None => return Err(semantic(line, CoreError::UndeclaredSymbol(name.clone()))),
                        Some(&declared) if declared != arity => {
                            return Err(semantic(
                                line,
                                CoreError::ArityClash {
                                    symbol: name.clone(),
                                    expected: declared,
                                    found: arity,
                                },
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
        Substrate::Hypergraph => {}
    }
    Ok(())
}

/// Text that `parse_rule_file` reads back to an equal `RuleFile`.
pub fn print_rule_file(file: &RuleFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "substrate: {}", file.substrate);
    if let Some(a) = &file.alphabet {
        let _ = writeln!(
            out,
            "alphabet: {}",
            a.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        );
    }
    if !file.vars.is_empty() {
        let _ = writeln!(out, "vars: {}", file.vars.join(" "));
    }
    if let Some(sig) = &file.signature {
        let items: Vec<String> = sig.iter().map(|(k, v)| format!("{k}/{v}")).collect();
        let _ = writeln!(out, "signature: {}", items.join(" "));
    }
    if !file.precedence.is_empty() {
        let _ = writeln!(out, "precedence: {}", file.precedence.join(" > "));
    }
    for s in &file.initial {
        let _ = writeln!(out, "init: {s}");
    }
    for (i, r) in file.rules.iter().enumerate() {
        out.push_str(&print_rule(r, i));
        out.push('\n');
    }
    out
}

/// One rule line; `index` is the rule's position, used to omit default ids.
pub fn print_rule(rule: &Rule, index: usize) -> String {
    let mut line = format!("{} -> {}", rule.lhs_text(), rule.rhs_text());
    if rule.level > 0 {
        let _ = write!(line, " @level {}", rule.level);
    }
    match (rule.is_anchored(), rule.level > 0) {
        (true, false) => line.push_str(" @anchored"),
        (false, true) => line.push_str(" @free"),
        _ => {}
    }
    if let RuleBody::Hypergraph(h) = &rule.body {
        if h.injective {
            line.push_str(" @injective");
        }
    }
    if rule.id != format!("r{}", index + 1) {
        let _ = write!(line, " @id {}", rule.id);
    }
    line
}
