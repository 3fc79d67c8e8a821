use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::{is_ma, is_pre_sd, is_semantically_deterministic, SdWitness};
use crate::automaton::{classify_acceptance, AcceptanceClass, ParityAutomaton};
use crate::error::{Error, Result};
use crate::games::{is_history_deterministic, MemoryStrategy};
use crate::lang::lasso_membership;
use crate::lasso::LassoWord;
use crate::limits::Limits;
use crate::prob::lasso_acceptance_probability;
use crate::rational::Rat;
use crate::resolver::{resolver_product, uniform_resolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResolverClass {
    Sd,
    PreSd,
    Hd,
    Ma,
    Sr,
    Mr,
}

impl ResolverClass {
    pub const ALL: [ResolverClass; 6] =
        [ResolverClass::Sd, ResolverClass::PreSd, ResolverClass::Hd, ResolverClass::Ma, ResolverClass::Sr, ResolverClass::Mr];
}

impl fmt::Display for ResolverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolverClass::Sd => "SD",
            ResolverClass::PreSd => "preSD",
            ResolverClass::Hd => "HD",
            ResolverClass::Ma => "MA",
            ResolverClass::Sr => "SR",
            ResolverClass::Mr => "MR",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Evidence {
    pub sd_witness: Option<SdWitness>,
    pub pre_sd_certificate: Option<ParityAutomaton>,
    pub ma_certificate: Option<ParityAutomaton>,
    pub hd_strategy: Option<MemoryStrategy>,
    /// Words of the language that the uniform resolver accepts with
    /// probability below one.
    pub uniform_failures: Vec<(LassoWord, Rat)>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub acceptance: AcceptanceClass,
    pub verdicts: BTreeMap<ResolverClass, Verdict>,
    pub notes: Vec<(ResolverClass, String)>,
    pub evidence: Evidence,
}

impl ClassificationReport {
    pub fn verdict(&self, c: ResolverClass) -> Verdict {
        self.verdicts[&c]
    }

    fn set(&mut self, c: ResolverClass, v: Verdict, note: impl Into<String>) {
        self.verdicts.insert(c, v);
        self.notes.push((c, note.into()));
    }

    fn record<T>(&mut self, c: ResolverClass, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(x) => Ok(Some(x)),
            Err(e) if e.is_resource() => {
                self.set(c, Verdict::Unknown, format!("not decided: {e}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    /// Closes the verdicts under the class inclusions, and fails on a
    /// contradiction.
    fn close(&mut self) -> Result<()> {
        use ResolverClass::*;
        const INCLUSIONS: [(ResolverClass, ResolverClass); 6] =
            [(Ma, Hd), (Ma, Mr), (Hd, Sr), (Mr, Sr), (Sr, PreSd), (Sd, PreSd)];
        loop {
            let mut changed = false;
            for (small, big) in INCLUSIONS {
                let (s, b) = (self.verdict(small), self.verdict(big));
                match (s, b) {
                    (Verdict::Yes, Verdict::No) => {
                        return Err(Error::Internal(format!("{small} = yes contradicts {big} = no")));
                    }
                    (Verdict::Yes, Verdict::Unknown) => {
                        self.set(big, Verdict::Yes, format!("implied by {small} = yes"));
                        changed = true;
                    }
                    (Verdict::Unknown, Verdict::No) => {
                        self.set(small, Verdict::No, format!("implied by {big} = no"));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

const EVIDENCE_ALPHABET: usize = 6;
const EVIDENCE_WORDS: usize = 4;

/// Lassos with a prefix of at most one letter and a period of at most two
/// that the automaton accepts but the uniform resolver does not almost surely.
fn uniform_failures(a: &ParityAutomaton) -> Result<Vec<(LassoWord, Rat)>> {
    let k = a.num_letters();
    if k > EVIDENCE_ALPHABET {
        return Ok(Vec::new());
    }
    let p = resolver_product(a, &uniform_resolver(a))?;
    let mut prefixes: Vec<Vec<usize>> = vec![vec![]];
    prefixes.extend((0..k).map(|x| vec![x]));
    let mut periods: Vec<Vec<usize>> = (0..k).map(|x| vec![x]).collect();
    periods.extend((0..k * k).map(|x| vec![x / k, x % k]));
    let mut out = Vec::new();
    for u in &prefixes {
        for v in &periods {
            let w = LassoWord::new(u.clone(), v.clone())?;
            if !lasso_membership(a, &w)? {
                continue;
            }
            let pr = lasso_acceptance_probability(&p, &w)?.value;
            if !pr.is_one() {
                out.push((w, pr));
                if out.len() == EVIDENCE_WORDS {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Decides or bounds every resolver class of `a`, dispatching on its
/// acceptance condition.
pub fn classify(a: &ParityAutomaton, limits: &Limits) -> Result<ClassificationReport> {
    use ResolverClass::*;
    let acceptance = classify_acceptance(a);
    let mut r = ClassificationReport {
        acceptance,
        verdicts: ResolverClass::ALL.iter().map(|&c| (c, Verdict::Unknown)).collect(),
        notes: Vec::new(),
        evidence: Evidence::default(),
    };

    if let Some(sd) = r.record(Sd, is_semantically_deterministic(a, limits))? {
        r.set(Sd, sd.semantically_deterministic.into(), "all successors on each letter checked for equal languages");
        r.evidence.sd_witness = sd.witness;
    }
    let hd = r.record(Hd, is_history_deterministic(a, limits))?;
    if let Some(hd) = &hd {
        r.set(Hd, hd.history_deterministic.into(), "2-token game");
        r.evidence.hd_strategy = hd.strategy.clone();
    }

    match acceptance {
        AcceptanceClass::Safety => {
            if let Some(hd) = hd {
                let v = Verdict::from(hd.history_deterministic);
                for c in [PreSd, Ma, Sr, Mr] {
                    r.set(c, v, "safety automaton: every resolver class coincides with history-determinism");
                }
            }
        }
        AcceptanceClass::Reachability | AcceptanceClass::Weak => {
            if let Some(hd) = hd {
                r.set(Ma, hd.history_deterministic.into(), "reachability or weak automaton: MA coincides with HD");
            }
            if r.verdict(Sd) == Verdict::Yes {
                r.set(PreSd, Verdict::Yes, "the automaton is its own SD subautomaton");
                r.evidence.pre_sd_certificate = Some(a.clone());
            } else if let Some(p) = r.record(PreSd, is_pre_sd(a, limits))? {
                r.set(PreSd, p.pre_sd.into(), format!("subautomaton search over {} candidates", p.candidates_checked));
                r.evidence.pre_sd_certificate = p.certificate;
            }
            let v = r.verdict(PreSd);
            for c in [Sr, Mr] {
                r.set(c, v, "reachability or weak automaton: SR and MR coincide with preSD");
            }
        }
        AcceptanceClass::Buchi | AcceptanceClass::CoBuchi | AcceptanceClass::Parity => {
            if r.verdict(Hd) == Verdict::Yes {
                if let Some(m) = r.record(Ma, is_ma(a, limits))? {
                    r.set(
                        Ma,
                        m.memoryless_adversarially_resolvable.into(),
                        format!("uniform 2-token MDP over {} candidate subautomata", m.candidates_checked),
                    );
                    r.evidence.ma_certificate = m.certificate;
                }
            }
            if r.verdict(Sd) == Verdict::Yes {
                r.set(PreSd, Verdict::Yes, "the automaton is its own SD subautomaton");
                r.evidence.pre_sd_certificate = Some(a.clone());
            } else if let Some(p) = r.record(PreSd, is_pre_sd(a, limits))? {
                r.set(PreSd, p.pre_sd.into(), format!("subautomaton search over {} candidates", p.candidates_checked));
                r.evidence.pre_sd_certificate = p.certificate;
            }
            r.close()?;
            for c in [Sr, Mr] {
                if r.verdict(c) == Verdict::Unknown {
                    r.notes.push((c, format!("no decision procedure is known for {acceptance} automata")));
                }
            }
            if r.verdict(Sr) == Verdict::Unknown || r.verdict(Mr) == Verdict::Unknown {
                r.evidence.uniform_failures = uniform_failures(a)?;
                for (w, p) in &r.evidence.uniform_failures {
                    let note = format!(
                        "uniform resolver accepts {} with probability {}",
                        w.display(a.alphabet()),
                        crate::rational::format_rat(p)
                    );
                    r.notes.push((Mr, note));
                }
            }
        }
    }
    r.close()?;
    Ok(r)
}
