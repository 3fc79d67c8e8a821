use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use omegares::classify::{
    build_hardness_instance, build_hardness_instance_unchecked, check_ma_certificate, classify, is_ma, is_pre_sd,
    is_semantically_deterministic, pba_to_cobuchi, pfa_to_buchi, sr_cobuchi_to_ma, ClassificationReport, ResolverClass,
};
use omegares::gallery::{gallery, GalleryParams, GALLERY_NAMES};
use omegares::games::{is_history_deterministic, Player};
use omegares::lang::lasso_membership;
use omegares::mdp::solve_muller_mdp;
use omegares::prob::{lasso_acceptance_probability, monte_carlo_estimate};
use omegares::rational::format_rat;
use omegares::resolver::{resolver_product, uniform_resolver, ProbabilisticParityAutomaton, Resolver};
use omegares::{Limits, ParityAutomaton, Priority};
use serde_json::{json, Map, Value};

use crate::doc::{
    parse_automaton, parse_dag, parse_game, parse_lasso, parse_mdp, parse_pfa, parse_resolver, write_automaton,
    write_resolver, AutomatonDocument, DagSpec, ParseError,
};
use crate::error::CliError;
use crate::report::{self, Report, Settings};

#[derive(Debug, Parser)]
#[command(name = "omegares", version, about = "Resolvers, history-determinism and almost-sure acceptance for parity automata")]
pub struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Bound on the states of any product, game or complement construction.
    #[arg(long, global = true, default_value_t = Settings::default().max_product_states)]
    pub max_product_states: usize,
    /// Subautomaton searches try at most 2^N candidates.
    #[arg(long, global = true, default_value_t = Settings::default().max_subset_search)]
    pub max_subset_search: usize,
    /// Wall-clock budget; unset means none.
    #[arg(long, global = true)]
    pub deadline_seconds: Option<f64>,
    /// Seed for Monte-Carlo simulation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input document (`-` for standard input).
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    #[command(flatten)]
    pub input: Input,
    /// `uniform` or a resolver document; defaults to the document's own
    /// probabilities, or uniform for a plain automaton.
    #[arg(long, value_name = "uniform|FILE")]
    pub resolver: Option<String>,
    /// Lasso `<prefix>$<period>` (`|` instead of `$` when `$` is a letter).
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide SD, preSD, HD, MA, SR and MR.
    Classify(Input),
    /// History-determinism via the 2-token game.
    CheckHd(Input),
    /// Memoryless adversarial resolvability, or check a given certificate.
    CheckMa {
        #[command(flatten)]
        input: Input,
        /// Subautomaton whose uniform resolver should be almost-surely accepting.
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
    },
    /// Semantic determinism.
    CheckSd(Input),
    /// Existence of an equivalent semantically deterministic subautomaton.
    CheckPresd(Input),
    /// Conversions between automata.
    Convert {
        #[command(subcommand)]
        conversion: Conversion,
    },
    /// Exact acceptance probability of a lasso under a resolver.
    Prob(ProbArgs),
    /// Monte-Carlo estimate of the acceptance probability.
    Simulate {
        #[command(flatten)]
        prob: ProbArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Periods per run; at least the number of product states.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Almost-sure and positive winning regions of a Muller MDP.
    SolveMdp {
        #[command(flatten)]
        input: Input,
        /// Zielonka DAG as JSON; defaults to max-even parity on the colors.
        #[arg(long, value_name = "FILE")]
        dag: Option<PathBuf>,
    },
    /// Print a built-in automaton, or list them.
    Gallery {
        name: Option<String>,
        /// Alphabet size of fig7-mr-buchi.
        #[arg(long)]
        n: Option<usize>,
        /// Priority span of parity-lang, as `LO,HI`.
        #[arg(long)]
        span: Option<String>,
    },
    /// Reduction gadgets.
    Gadget {
        #[command(subcommand)]
        gadget: Gadget,
    },
}

#[derive(Debug, Subcommand)]
pub enum Conversion {
    /// SR coBuchi automaton to an equivalent MA automaton.
    Sr2ma {
        #[command(flatten)]
        input: Input,
        /// Write the converted automaton here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Gadget {
    /// Finite-word probabilistic automaton to Buchi automaton and resolver.
    Pfa2buchi {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        resolver_out: Option<PathBuf>,
    },
    /// Probabilistic Buchi automaton to coBuchi automaton and resolver.
    Pba2cobuchi {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        resolver_out: Option<PathBuf>,
    },
    /// Two-dimensional parity game to the automaton that is MA iff Eve wins.
    Hardness {
        #[command(flatten)]
        input: Input,
        /// Build the gadget even if the game is not good.
        #[arg(long)]
        unchecked: bool,
        /// Write the deterministic part here.
        #[arg(long, value_name = "FILE")]
        det_out: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::CheckHd(_) => "check-hd",
            Command::CheckMa { .. } => "check-ma",
            Command::CheckSd(_) => "check-sd",
            Command::CheckPresd(_) => "check-presd",
            Command::Convert { .. } => "convert sr2ma",
            Command::Prob(_) => "prob",
            Command::Simulate { .. } => "simulate",
            Command::SolveMdp { .. } => "solve-mdp",
            Command::Gallery { .. } => "gallery",
            Command::Gadget { gadget: Gadget::Pfa2buchi { .. } } => "gadget pfa2buchi",
            Command::Gadget { gadget: Gadget::Pba2cobuchi { .. } } => "gadget pba2cobuchi",
            Command::Gadget { gadget: Gadget::Hardness { .. } } => "gadget hardness",
        }
    }
}

impl Cli {
    pub fn settings(&self) -> Settings {
        Settings {
            max_product_states: self.max_product_states,
            max_subset_search: self.max_subset_search,
            deadline_seconds: self.deadline_seconds,
            seed: self.seed,
            ..Settings::default()
        }
    }
}

fn limits(s: &Settings) -> Result<Limits, CliError> {
    let deadline = match s.deadline_seconds {
        None => None,
        Some(t) if t.is_finite() && t >= 0.0 => Some(Instant::now() + Duration::from_secs_f64(t)),
        Some(t) => return Err(CliError::Usage(format!("--deadline-seconds must be a nonnegative number, got {t}"))),
    };
    Ok(Limits {
        max_product_states: s.max_product_states,
        max_subset_search: s.max_subset_search,
        max_dag_colors: s.max_dag_colors,
        deadline,
        cancel: None,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(io);
    }
    std::fs::read_to_string(path).map_err(io)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<AutomatonDocument, CliError> {
    parsed(path, parse_automaton(&read(path)?))
}

fn load_plain(i: &Input) -> Result<ParityAutomaton, CliError> {
    Ok(load(&i.input)?.automaton().clone())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn names(a: &ParityAutomaton, states: impl IntoIterator<Item = usize>) -> Vec<String> {
    states.into_iter().map(|q| a.states()[q].clone()).collect()
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let settings = cli.settings();
    let l = limits(&settings)?;
    match &cli.command {
        Command::Classify(i) => classify_cmd(&load_plain(i)?, &l),
        Command::CheckHd(i) => {
            let v = is_history_deterministic(&load_plain(i)?, &l)?;
            let memory = v.strategy.as_ref().map(|s| s.memory);
            let note = format!("2-token game with {} vertices, Zielonka DAG with {} nodes", v.game_vertices, v.dag_nodes);
            Ok(Report {
                text: format!("HD: {}\n{note}\n", yes_no(v.history_deterministic)),
                result: json!({
                    "HD": yes_no(v.history_deterministic),
                    "game_vertices": v.game_vertices,
                    "dag_nodes": v.dag_nodes,
                    "strategy_memory": memory,
                    "notes": [note],
                }),
            })
        }
        Command::CheckMa { input, certificate: Some(c) } => {
            let a = load_plain(input)?;
            let b = load(c)?.automaton().clone();
            let ok = check_ma_certificate(&a, &b, &l)?;
            let note = "uniform resolver on the certificate, checked on the product MDP by the Muller almost-sure solver";
            Ok(Report {
                text: format!("certificate valid: {}\n", yes_no(ok)),
                result: json!({"certificate_valid": yes_no(ok), "certificate": b.name(), "notes": [note]}),
            })
        }
        Command::CheckMa { input, certificate: None } => {
            let v = is_ma(&load_plain(input)?, &l)?;
            let ma = v.memoryless_adversarially_resolvable;
            let note = format!("{} subautomata checked, largest first", v.candidates_checked);
            let mut text = format!("MA: {}\n{note}\n", yes_no(ma));
            if let Some(c) = &v.certificate {
                let _ = write!(text, "certificate:\n{}", write_automaton(c));
            }
            Ok(Report {
                text,
                result: json!({
                    "MA": yes_no(ma),
                    "candidates_checked": v.candidates_checked,
                    "certificate": v.certificate.as_ref().map(report::automaton),
                    "notes": [note],
                }),
            })
        }
        Command::CheckSd(i) => {
            let a = load_plain(i)?;
            let v = is_semantically_deterministic(&a, &l)?;
            let w = v.witness.as_ref().map(|w| witness(&a, w));
            let mut text = format!("SD: {}\n", yes_no(v.semantically_deterministic));
            if let Some(w) = &w {
                let _ = writeln!(text, "witness: {w}");
            }
            Ok(Report { text, result: json!({"SD": yes_no(v.semantically_deterministic), "witness": w}) })
        }
        Command::CheckPresd(i) => {
            let v = is_pre_sd(&load_plain(i)?, &l)?;
            let note = format!("{} subautomata checked, largest first", v.candidates_checked);
            let mut text = format!("preSD: {}\n{note}\n", yes_no(v.pre_sd));
            if let Some(c) = &v.certificate {
                let _ = write!(text, "certificate:\n{}", write_automaton(c));
            }
            Ok(Report {
                text,
                result: json!({
                    "preSD": yes_no(v.pre_sd),
                    "candidates_checked": v.candidates_checked,
                    "certificate": v.certificate.as_ref().map(report::automaton),
                    "notes": [note],
                }),
            })
        }
        Command::Convert { conversion: Conversion::Sr2ma { input, out } } => {
            let a = load_plain(input)?;
            let c = sr_cobuchi_to_ma(&a, &l)?;
            let doc = write_automaton(&c.automaton);
            let text = match out {
                Some(p) => {
                    write(p, &doc)?;
                    format!("{} states -> {} states, written to {}\n", a.num_states(), c.automaton.num_states(), p.display())
                }
                None => doc.clone(),
            };
            Ok(Report {
                text,
                result: json!({
                    "automaton": doc,
                    "input_states": a.num_states(),
                    "output_states": c.automaton.num_states(),
                    "certificate": report::automaton(&c.certificate),
                    "safe_deterministic": names(&a, c.safe_deterministic.iter().copied()),
                    "notes": ["equivalence with the input checked", "certificate checked with the uniform resolver"],
                }),
            })
        }
        Command::Prob(p) => prob_cmd(p),
        Command::Simulate { prob, trials, horizon } => simulate_cmd(prob, *trials, *horizon, settings.seed),
        Command::SolveMdp { input, dag } => {
            let m = parsed(&input.input, parse_mdp(&read(&input.input)?))?;
            let form = match dag {
                Some(p) => parsed(p, parse_dag(&read(p)?))?,
                None => DagSpec::Parity,
            };
            let d = form.build(m.color_bound(), &l)?;
            let v = solve_muller_mdp(&m, &d, &l)?;
            let region = |r: &[bool]| -> Vec<String> {
                (0..m.num_vertices()).filter(|&v| r[v]).map(|v| m.label(v).to_string()).collect()
            };
            let strategy: Map<String, Value> =
                v.strategy.iter().map(|(&u, es)| (m.label(u).to_string(), json!(es))).collect();
            let (sure, pos) = (region(&v.almost_sure), region(&v.positive));
            let text = format!(
                "almost-sure: {}\npositive: {}\ninitial vertex: {}\n",
                sure.join(" "),
                pos.join(" "),
                if v.almost_sure[m.initial()] { "almost-sure" } else if v.positive[m.initial()] { "positive" } else { "losing" }
            );
            Ok(Report {
                text,
                result: json!({
                    "almost_sure": sure,
                    "positive": pos,
                    "strategy": strategy,
                    "dag_nodes": d.len(),
                    "notes": ["strategy lists, per controlled vertex, the indices of the `e` lines it randomizes over uniformly"],
                }),
            })
        }
        Command::Gallery { name: None, .. } => {
            Ok(Report { text: GALLERY_NAMES.iter().map(|n| format!("{n}\n")).collect(), result: json!({"names": GALLERY_NAMES}) })
        }
        Command::Gallery { name: Some(name), n, span } => {
            let span = span.as_deref().map(parse_span).transpose()?;
            let a = gallery(name, &GalleryParams { n: *n, span })?;
            let doc = write_automaton(&a);
            Ok(Report { result: json!({"name": a.name(), "states": a.num_states(), "document": doc}), text: doc })
        }
        Command::Gadget { gadget } => gadget_cmd(gadget, &l),
    }
}

fn parse_span(s: &str) -> Result<(Priority, Priority), CliError> {
    let bad = || CliError::Usage(format!("--span expects LO,HI, got `{s}`"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn witness(a: &ParityAutomaton, w: &omegares::classify::SdWitness) -> Value {
    let (x, y) = w.successors;
    let word = w.separation.counterexample.as_ref();
    json!({
        "state": a.states()[w.state],
        "letter": a.alphabet()[w.letter],
        "successors": [a.states()[x], a.states()[y]],
        "word": word.map(|c| report::lasso(c, a)),
        "accepted_from": word.map(|_| a.states()[if w.separation.accepted_by_left { x } else { y }].clone()),
    })
}

fn classify_cmd(a: &ParityAutomaton, l: &Limits) -> Result<Report, CliError> {
    let r: ClassificationReport = classify(a, l)?;
    let verdicts: Map<String, Value> = r.verdicts.iter().map(|(c, v)| (c.to_string(), json!(v.to_string()))).collect();
    let notes: Vec<Value> = r.notes.iter().map(|(c, n)| json!({"class": c.to_string(), "note": n})).collect();
    let e = &r.evidence;
    let failures: Vec<Value> = e
        .uniform_failures
        .iter()
        .map(|(w, p)| json!({"word": report::lasso(w, a), "probability": report::rat(p)}))
        .collect();
    let evidence = json!({
        "sd_witness": e.sd_witness.as_ref().map(|w| witness(a, w)),
        "pre_sd_certificate": e.pre_sd_certificate.as_ref().map(report::automaton),
        "ma_certificate": e.ma_certificate.as_ref().map(report::automaton),
        "hd_strategy_memory": e.hd_strategy.as_ref().map(|s| s.memory),
        "uniform_failures": failures,
    });
    let mut text = format!("automaton {} ({} acceptance)\n", a.name(), r.acceptance);
    for c in ResolverClass::ALL {
        let _ = writeln!(text, "{c}: {}", r.verdict(c));
    }
    for (c, n) in &r.notes {
        let _ = writeln!(text, "  {c}: {n}");
    }
    for (w, p) in &e.uniform_failures {
        let _ = writeln!(text, "  uniform resolver accepts {} with probability {}", crate::doc::write_lasso(w, a.alphabet()), format_rat(p));
    }
    Ok(Report {
        text,
        result: json!({
            "automaton": a.name(),
            "acceptance": r.acceptance.to_string(),
            "verdicts": verdicts,
            "notes": notes,
            "evidence": evidence,
        }),
    })
}

/// The automaton and the probabilistic automaton induced by the chosen resolver.
fn resolved(p: &ProbArgs) -> Result<(ParityAutomaton, ProbabilisticParityAutomaton, &'static str), CliError> {
    let d = load(&p.input.input)?;
    let a = d.automaton().clone();
    let r: Resolver = match (p.resolver.as_deref(), &d) {
        (None, AutomatonDocument::Probabilistic(pp)) => return Ok((a, pp.clone(), "document")),
        (None, _) | (Some("uniform"), _) => uniform_resolver(&a),
        (Some(path), _) => {
            let path = Path::new(path);
            parsed(path, parse_resolver(&read(path)?, &a))?
        }
    };
    let kind = if p.resolver.as_deref().is_some_and(|r| r != "uniform") { "file" } else { "uniform" };
    Ok((a.clone(), resolver_product(&a, &r)?, kind))
}

fn prob_cmd(p: &ProbArgs) -> Result<Report, CliError> {
    let (a, pp, kind) = resolved(p)?;
    let w = parsed(Path::new("--word"), parse_lasso(&p.word, a.alphabet()))?;
    let v = lasso_acceptance_probability(&pp, &w)?;
    let member = lasso_membership(&a, &w)?;
    let prod = pp.automaton();
    let components: Vec<Value> = v
        .components
        .iter()
        .map(|c| {
            json!({
                "states": c.states.iter().map(|&(q, i)| format!("{}@{i}", prod.states()[q])).collect::<Vec<_>>(),
                "max_priority": c.max_priority,
                "accepting": c.accepting,
                "reach": report::rat(&c.reach),
            })
        })
        .collect();
    Ok(Report {
        text: format!("{}\n", format_rat(&v.value)),
        result: json!({
            "probability": report::rat(&v.value),
            "member": member,
            "word": report::lasso(&w, &a),
            "resolver": kind,
            "bottom_components": components,
            "notes": ["exact absorption probabilities of the (state, lasso position) chain"],
        }),
    })
}

fn simulate_cmd(p: &ProbArgs, trials: u64, horizon: Option<usize>, seed: u64) -> Result<Report, CliError> {
    let (a, pp, kind) = resolved(p)?;
    let w = parsed(Path::new("--word"), parse_lasso(&p.word, a.alphabet()))?;
    let horizon = horizon.unwrap_or(pp.automaton().num_states().max(64));
    if trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let e = monte_carlo_estimate(&pp, &w, trials, horizon, seed)?;
    Ok(Report {
        text: format!("{:.6} ± {:.6} ({} of {} runs accepted)\n", e.estimate, e.radius, e.accepted, e.trials),
        result: json!({
            "trials": e.trials,
            "accepted": e.accepted,
            "frequency": format!("{}/{}", e.accepted, e.trials),
            "estimate": e.estimate,
            "radius": e.radius,
            "horizon_periods": horizon,
            "seed": seed,
            "word": report::lasso(&w, &a),
            "resolver": kind,
            "notes": ["radius is the half-width of a 99% Wilson interval"],
        }),
    })
}

fn gadget_cmd(g: &Gadget, l: &Limits) -> Result<Report, CliError> {
    match g {
        Gadget::Pfa2buchi { input, resolver_out } => {
            let pfa = parsed(&input.input, parse_pfa(&read(&input.input)?))?;
            let r = pfa_to_buchi(&pfa)?;
            let res = write_resolver(&r.resolver, &r.automaton);
            if let Some(p) = resolver_out {
                write(p, &res)?;
            }
            let doc = write_automaton(&r.automaton);
            Ok(Report { result: json!({"automaton": doc, "resolver": res, "separator": r.separator}), text: doc })
        }
        Gadget::Pba2cobuchi { input, resolver_out } => {
            let AutomatonDocument::Probabilistic(p) = load(&input.input)? else {
                return Err(CliError::Core(omegares::Error::NotApplicable(
                    "pba2cobuchi needs a probabilistic automaton (`p` lines)".into(),
                )));
            };
            let r = pba_to_cobuchi(&p)?;
            let res = write_resolver(&r.resolver, &r.automaton);
            if let Some(path) = resolver_out {
                write(path, &res)?;
            }
            let doc = write_automaton(&r.automaton);
            Ok(Report {
                result: json!({"automaton": doc, "resolver": res, "dollar": r.dollar, "left": r.left, "right": r.right}),
                text: doc,
            })
        }
        Gadget::Hardness { input, unchecked, det_out } => {
            let game = parsed(&input.input, parse_game(&read(&input.input)?))?;
            let good = game.is_good(l)?;
            let inst = if *unchecked { build_hardness_instance_unchecked(&game)? } else { build_hardness_instance(&game, l)? };
            let winner = match game.winner(l)? {
                Player::Eve => "eve",
                Player::Adam => "adam",
            };
            let det = write_automaton(&inst.d);
            if let Some(p) = det_out {
                write(p, &det)?;
            }
            let doc = write_automaton(&inst.h);
            Ok(Report {
                result: json!({"automaton": doc, "deterministic_part": det, "separator": inst.separator, "good": good, "winner": winner}),
                text: doc,
            })
        }
    }
}
