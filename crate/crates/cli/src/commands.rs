use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use multiway_core::causal::{build_causal_network, causal_invariance_verdict, multiway_causal_graph, Verdict};
use multiway_core::completion::{
    knuth_bendix_with, observe, CompletionConfig, Origin, ReductionOrdering, StringOrdering,
};
use multiway_core::homotopy::{
    check_composition_closure, find_cubes, find_squares, path_states, synthesize_homotopy_rules,
};
use multiway_core::hypergraph::{categorify, groupoidify};
use multiway_core::multiway::{
    branchial_graph, evolve_with, foliate, paths_between, singleway_evolve, EvolveConfig, MultiwayGraph, Strategy,
};
use multiway_core::rewrite::{Rule, State, StateKey, Substrate};
use multiway_core::term::{OrderKind, TermOrdering};

use crate::dot;
use crate::dsl::{parse_rule_file, print_rule_file, DslError, RuleFile};
use crate::json::{causal_report, closure_report, event_entry, export_json, rule_entry, Document, StateEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    /// Rule-file text (synth and complete only).
    Dsl,
}

#[derive(Debug, Parser)]
#[command(
    name = "multiway",
    version,
    about = "Multiway rewriting, causal structure and homotopy cells"
)]
pub struct Cli {
    /// Evolution depth.
    #[arg(long, global = true, default_value_t = 4)]
    pub steps: usize,
    /// Fail once more states than this are discovered.
    #[arg(long, global = true, env = "MULTIWAY_MAX_STATES")]
    pub max_states: Option<usize>,
    /// Seed for randomized single-way evolution.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Let whole-state rules fire inside larger states.
    #[arg(long, global = true)]
    pub unanchored: bool,
    /// History depth for causal invariance, ancestor depth for branchial
    /// graphs.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiway evolution graph.
    Evolve { file: PathBuf },
    /// One evolution history from the first initial state.
    Singleway {
        file: PathBuf,
        /// Apply a seeded random maximal set of non-overlapping matches per
        /// step instead of the first match.
        #[arg(long)]
        random: bool,
    },
    /// Causal overlay of the evolution and a causal invariance verdict.
    Causal {
        file: PathBuf,
        /// Compare causal networks without rule labels.
        #[arg(long)]
        unlabeled: bool,
        #[arg(long, default_value_t = 10_000)]
        path_cap: usize,
    },
    /// Branchial graphs of the generational foliation.
    Branchial {
        file: PathBuf,
        /// Only this slice.
        #[arg(long)]
        slice: Option<usize>,
    },
    /// Homotopy rule synthesis, induction and cell detection.
    #[command(subcommand)]
    Homotopy(HomotopyCommand),
    /// Knuth-Bendix completion of the level-0 rules.
    Complete {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_rules: usize,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        /// Skip interreduction.
        #[arg(long)]
        naive: bool,
        /// Term ordering.
        #[arg(long, value_enum, default_value_t = TermOrder::Lpo)]
        ordering: TermOrder,
        /// Also report branchial sizes before and after completion.
        #[arg(long)]
        observe: bool,
    },
    /// Category or groupoid closure of each initial hypergraph.
    Closure {
        file: PathBuf,
        #[arg(value_enum)]
        mode: ClosureMode,
    },
    /// Everything about the evolution: graph, causal edges, squares.
    Export { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum HomotopyCommand {
    /// Rules pairing the states of two paths.
    Synth {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        /// Indices of the two paths among all paths from `--from` to `--to`.
        #[arg(long, default_value_t = 0)]
        first: usize,
        #[arg(long, default_value_t = 1)]
        second: usize,
        /// Explicit paths, comma-separated states.
        #[arg(long, requires = "path2", conflicts_with_all = ["from", "to"])]
        path1: Option<String>,
        #[arg(long, requires = "path1")]
        path2: Option<String>,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Evolution under the whole rule tower, plus rules from `--with`.
    Induce {
        file: PathBuf,
        #[arg(long)]
        with: Option<PathBuf>,
    },
    /// Squares (dimension 2) or cubes (dimension 3) and a closure check.
    Cells {
        file: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClosureMode {
    Categorify,
    Groupoidify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TermOrder {
    Lpo,
    Shortlex,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Dsl { path: String, source: DslError },
    #[error(transparent)]
    Core(#[from] multiway_core::Error),
    #[error("{0}")]
    Usage(String),
}

/// Output text and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn load(path: &PathBuf) -> Result<RuleFile, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_rule_file(&text).map_err(|source| CliError::Dsl { path: shown, source })
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Cli {
    fn config(&self) -> EvolveConfig {
        EvolveConfig {
            steps: self.steps,
            max_states: self.max_states,
            threads: self.threads,
        }
    }

    fn rules(&self, file: &RuleFile) -> Vec<Rule> {
        if self.unanchored {
            file.rules.iter().map(Rule::unanchored).collect()
        } else {
            file.rules.clone()
        }
    }

    fn evolve(&self, file: &RuleFile) -> Result<MultiwayGraph, CliError> {
        Ok(evolve_with(&file.initial, &self.rules(file), &self.config())?)
    }

    fn first_initial<'f>(&self, file: &'f RuleFile) -> Result<&'f State, CliError> {
        file.initial
            .first()
            .ok_or_else(|| usage("the rule file has no `init:` state"))
    }

    fn only(&self, allowed: &[Format]) -> Result<(), CliError> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(usage(
                format!("--format {:?} is not available for this command", self.format).to_lowercase(),
            ))
        }
    }
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Evolve { file } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let g = cli.evolve(&load(file)?)?;
            Ok(Outcome::ok(match cli.format {
                Format::Dot => dot::graph_dot(&g),
                _ => export_json(&Document::from_graph(&g)),
            }))
        }
        Command::Singleway { file, random } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let f = load(file)?;
            let strategy = if *random {
                Strategy::AllNonOverlapping(cli.seed)
            } else {
                Strategy::FirstMatch
            };
            let history = singleway_evolve(cli.first_initial(&f)?, &cli.rules(&f), cli.steps, strategy)?;
            let events: Vec<_> = history.iter().flat_map(|(_, e)| e.iter().cloned()).collect();
            let net = build_causal_network(&events)?;
            if cli.format == Format::Dot {
                return Ok(Outcome::ok(dot::causal_dot(&net)));
            }
            let mut doc = Document::new(f.substrate);
            doc.rules = f.rules.iter().map(rule_entry).collect();
            doc.states = history
                .iter()
                .enumerate()
                .map(|(i, (s, _))| StateEntry {
                    key: s.key().to_string(),
                    generation: Some(i as u32),
                    initial: i == 0,
                })
                .collect();
            doc.events = events.iter().map(event_entry).collect();
            doc.edges = net
                .edges
                .iter()
                .map(|c| crate::json::EdgeEntry {
                    kind: crate::json::EdgeKind::Causal,
                    source: c.from.to_string(),
                    target: c.to.to_string(),
                    level: None,
                    event: None,
                    weight: Some(c.witness.len()),
                    slice: None,
                })
                .collect();
            doc.report(
                "singleway",
                json!({
                    "strategy": if *random { "random" } else { "first" },
                    "seed": cli.seed,
                    "steps": history.len() - 1,
                }),
            );
            Ok(Outcome::ok(export_json(&doc)))
        }
        Command::Causal {
            file,
            unlabeled,
            path_cap,
        } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let f = load(file)?;
            let rules = cli.rules(&f);
            let report = causal_invariance_verdict(cli.first_initial(&f)?, &rules, cli.depth, *path_cap, !unlabeled)?;
            let code = if report.verdict == Verdict::Inconclusive { 2 } else { 0 };
            let g = cli.evolve(&f)?;
            let overlay = multiway_causal_graph(&g);
            let text = match cli.format {
                Format::Dot => dot::overlay_dot(&g, &overlay),
                _ => {
                    let mut doc = Document::from_graph(&g);
                    doc.add_causal(&overlay);
                    doc.report("causal", causal_report(&report));
                    export_json(&doc)
                }
            };
            Ok(Outcome { text, code })
        }
        Command::Branchial { file, slice } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let g = cli.evolve(&load(file)?)?;
            let fol = foliate(&g)?;
            let indices: Vec<usize> = match slice {
                Some(s) => vec![*s],
                None => (0..fol.slices.len()).collect(),
            };
            let graphs = indices
                .iter()
                .map(|&i| branchial_graph(&g, &fol, i, cli.depth))
                .collect::<Result<Vec<_>, _>>()?;
            if cli.format == Format::Dot {
                return Ok(Outcome::ok(dot::branchial_dot(&graphs)));
            }
            let mut doc = Document::new(g.substrate);
            doc.states = graphs
                .iter()
                .flat_map(|b| {
                    b.vertices.iter().map(move |k| StateEntry {
                        key: k.to_string(),
                        generation: Some(b.slice as u32),
                        initial: false,
                    })
                })
                .collect();
            for b in &graphs {
                doc.add_branchial(b);
            }
            let sizes: Vec<_> = graphs
                .iter()
                .map(|b| json!({"slice": b.slice, "states": b.vertices.len(), "edges": b.edges.len()}))
                .collect();
            doc.report("branchial", json!({"ancestor_depth": cli.depth, "slices": sizes}));
            Ok(Outcome::ok(export_json(&doc)))
        }
        Command::Homotopy(h) => run_homotopy(cli, h),
        Command::Complete {
            file,
            max_rules,
            max_iters,
            naive,
            ordering,
            observe: with_observer,
        } => {
            cli.only(&[Format::Json, Format::Dsl])?;
            let f = load(file)?;
            let rules: Vec<Rule> = f.rules.iter().filter(|r| r.level == 0).cloned().collect();
            let reduction = match f.substrate {
                Substrate::Term => {
                    let kind = match ordering {
                        TermOrder::Lpo => OrderKind::Lpo,
                        TermOrder::Shortlex => OrderKind::Shortlex,
                    };
                    let prec: Vec<&str> = f.precedence.iter().map(String::as_str).collect();
                    ReductionOrdering::Terms(TermOrdering::new(kind, &prec))
                }
                _ => ReductionOrdering::Strings(StringOrdering {
                    alphabet: f.effective_alphabet(),
                }),
            };
            let config = CompletionConfig {
                ordering: reduction,
                max_rules: *max_rules,
                max_iters: *max_iters,
                interreduce: !naive,
            };
            let (done, observer) = if *with_observer {
                let report = observe(&f.initial, &rules, &config, cli.steps, cli.depth)?;
                let sizes = |v: &[multiway_core::completion::SliceSize]| {
                    v.iter()
                        .map(|s| json!({"slice": s.slice, "states": s.states, "edges": s.edges}))
                        .collect::<Vec<_>>()
                };
                let obs = json!({"before": sizes(&report.before), "after": sizes(&report.after)});
                (report.completion, Some(obs))
            } else {
                (knuth_bendix_with(&rules, &config)?, None)
            };
            if cli.format == Format::Dsl {
                let mut out = RuleFile {
                    rules: done.rules.clone(),
                    ..f.clone()
                };
                out.rules = done.rules;
                return Ok(Outcome::ok(print_rule_file(&out)));
            }
            let mut doc = Document::new(f.substrate);
            doc.rules = done.rules.iter().map(rule_entry).collect();
            let provenance: Vec<_> = done
                .provenance
                .iter()
                .map(|p| {
                    let origin = match &p.origin {
                        Origin::Input => json!({"kind": "input"}),
                        Origin::CriticalPair { outer, inner, peak } => {
                            json!({"kind": "critical-pair", "outer": outer, "inner": inner, "peak": peak})
                        }
                        Origin::Reduced { from } => json!({"kind": "reduced", "from": from}),
                    };
                    json!({"rule": p.rule, "origin": origin, "used": p.used})
                })
                .collect();
            doc.report(
                "completion",
                json!({"iterations": done.iterations, "trace": done.trace, "provenance": provenance}),
            );
            if let Some(obs) = observer {
                doc.report("observer", obs);
            }
            Ok(Outcome::ok(export_json(&doc)))
        }
        Command::Closure { file, mode } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let f = load(file)?;
            let mut closed = Vec::new();
            for s in &f.initial {
                let State::Hypergraph(h) = s else {
                    return Err(CliError::Core(multiway_core::Error::SubstrateUnsupported(
                        s.substrate(),
                    )));
                };
                closed.push(match mode {
                    ClosureMode::Categorify => categorify(h)?,
                    ClosureMode::Groupoidify => groupoidify(h)?,
                });
            }
            if cli.format == Format::Dot {
                return Ok(Outcome::ok(closed.iter().map(dot::hypergraph_dot).collect()));
            }
            let mut doc = Document::new(Substrate::Hypergraph);
            doc.states = closed
                .iter()
                .map(|h| StateEntry {
                    key: h.to_string(),
                    generation: None,
                    initial: false,
                })
                .collect();
            let pairs: Vec<_> = f
                .initial
                .iter()
                .zip(&closed)
                .map(|(a, b)| json!({"input": a.to_string(), "output": b.to_string(), "added": b.edges.len() - a.tokens().len()}))
                .collect();
            let name = match mode {
                ClosureMode::Categorify => "categorify",
                ClosureMode::Groupoidify => "groupoidify",
            };
            doc.report("closure", json!({"mode": name, "results": pairs}));
            Ok(Outcome::ok(export_json(&doc)))
        }
        Command::Export { file } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let g = cli.evolve(&load(file)?)?;
            let overlay = multiway_causal_graph(&g);
            if cli.format == Format::Dot {
                return Ok(Outcome::ok(dot::overlay_dot(&g, &overlay)));
            }
            let mut doc = Document::from_graph(&g);
            doc.add_causal(&overlay);
            if g.max_level().unwrap_or(0) >= 1 {
                doc.add_squares(&find_squares(&g));
            }
            Ok(Outcome::ok(export_json(&doc)))
        }
    }
}

fn parse_path(f: &RuleFile, csv: &str) -> Result<Vec<State>, CliError> {
    csv.split(',')
        .map(|s| State::parse(f.substrate, s.trim()).map_err(CliError::from))
        .collect()
}

fn run_homotopy(cli: &Cli, h: &HomotopyCommand) -> Result<Outcome, CliError> {
    match h {
        HomotopyCommand::Synth {
            file,
            from,
            to,
            first,
            second,
            path1,
            path2,
            level,
        } => {
            cli.only(&[Format::Json, Format::Dsl])?;
            let f = load(file)?;
            let (p1, p2) = match (path1, path2) {
                (Some(a), Some(b)) => (parse_path(&f, a)?, parse_path(&f, b)?),
                _ => {
                    let (Some(from), Some(to)) = (from, to) else {
                        return Err(usage("give --from and --to, or --path1 and --path2"));
                    };
                    let base: Vec<Rule> = f.rules.iter().filter(|r| r.level + 1 == *level).cloned().collect();
                    let g = evolve_with(&f.initial, &base, &cli.config())?;
                    let key = |t: &str| State::parse(f.substrate, t).map(|s| s.key());
                    let (a, b): (StateKey, StateKey) = (key(from)?, key(to)?);
                    let paths = paths_between(&g, &a, &b, first.max(second) + 1, cli.steps)?;
                    let pick = |i: usize| {
                        paths
                            .get(i)
                            .ok_or_else(|| usage(format!("only {} paths from {a} to {b}", paths.len())))
                    };
                    (path_states(&g, pick(*first)?)?, path_states(&g, pick(*second)?)?)
                }
            };
            let rules = synthesize_homotopy_rules(&p1, &p2, *level)?;
            if cli.format == Format::Dsl {
                let mut out = RuleFile::new(f.substrate);
                out.rules = rules;
                return Ok(Outcome::ok(print_rule_file(&out)));
            }
            let mut doc = Document::new(f.substrate);
            doc.rules = rules.iter().map(rule_entry).collect();
            let show = |p: &[State]| p.iter().map(|s| s.to_string()).collect::<Vec<_>>();
            doc.report(
                "synthesis",
                json!({"level": level, "path1": show(&p1), "path2": show(&p2)}),
            );
            Ok(Outcome::ok(export_json(&doc)))
        }
        HomotopyCommand::Induce { file, with } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let mut f = load(file)?;
            if let Some(extra) = with {
                let e = load(extra)?;
                if e.substrate != f.substrate {
                    return Err(CliError::Core(multiway_core::Error::SubstrateMismatch {
                        expected: f.substrate,
                        found: e.substrate,
                    }));
                }
                f.rules.extend(e.rules);
            }
            let g = cli.evolve(&f)?;
            Ok(Outcome::ok(match cli.format {
                Format::Dot => dot::graph_dot(&g),
                _ => export_json(&Document::from_graph(&g)),
            }))
        }
        HomotopyCommand::Cells { file, dim } => {
            cli.only(&[Format::Json, Format::Dot])?;
            let f = load(file)?;
            if f.tower().height() > 3 {
                return Err(usage("cell detection supports rule towers of height at most 3"));
            }
            let g = cli.evolve(&f)?;
            if cli.format == Format::Dot {
                return Ok(Outcome::ok(dot::graph_dot(&g)));
            }
            let mut doc = Document::from_graph(&g);
            if *dim == 2 {
                doc.add_squares(&find_squares(&g));
            } else {
                doc.add_cubes(&find_cubes(&g));
            }
            doc.report("closure", closure_report(&check_composition_closure(&g, *dim as usize)));
            Ok(Outcome::ok(export_json(&doc)))
        }
    }
}
