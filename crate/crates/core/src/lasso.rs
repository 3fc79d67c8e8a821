use crate::automaton::Letter;
use crate::error::{Error, Result};

/// An ultimately periodic word `prefix · period^ω` over letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidWord("empty period".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Number of distinct positions of the lasso graph.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn letter_at(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[pos - self.prefix.len()]
        }
    }

    /// Position following `pos`, wrapping the last period position back.
    pub fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 == self.positions() {
            self.prefix.len()
        } else {
            pos + 1
        }
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn check_alphabet(&self, letters: usize) -> Result<()> {
        if let Some(&l) = self.prefix.iter().chain(&self.period).find(|&&l| l >= letters) {
            return Err(Error::AlphabetMismatch(format!(
                "letter index {l} outside an alphabet of size {letters}"
            )));
        }
        Ok(())
    }

    /// Renders letters by name, joined with spaces, prefix and period separated by `$`.
    pub fn display(&self, alphabet: &[String]) -> String {
        let p: Vec<&str> = self.prefix.iter().map(|&l| alphabet[l].as_str()).collect();
        let c: Vec<&str> = self.period.iter().map(|&l| alphabet[l].as_str()).collect();
        format!("{} $ {}", p.join(" "), c.join(" ")).trim().to_string()
    }
}
