//! Line-oriented text formats. Every line is a keyword followed by
//! whitespace-separated arguments; `#` starts a comment.

mod automaton;
mod dag;
mod game;
mod lasso;
mod mdp;
mod pfa;
mod resolver;

use std::collections::HashMap;
use std::str::FromStr;

use omegares::rational::parse_rat;
use omegares::Rat;

pub use automaton::{parse_automaton, write_automaton, write_probabilistic, AutomatonDocument};
pub use dag::{parse_dag, write_dag, DagSpec};
pub use game::{parse_game, write_game};
pub use lasso::{parse_lasso, write_lasso};
pub use mdp::{parse_mdp, write_mdp};
pub use pfa::{parse_pfa, write_pfa};
pub use resolver::{parse_resolver, write_resolver};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error(transparent)]
    Semantic(#[from] omegares::Error),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column: self.column, message: message.into() }
    }

    pub fn number<T: FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text.parse().map_err(|_| self.err(format!("expected {what}, found `{}`", self.text)))
    }

    pub fn rat(&self) -> Result<Rat, ParseError> {
        parse_rat(self.text).ok_or_else(|| self.err(format!("expected a fraction num/den, found `{}`", self.text)))
    }

    /// Index of this token in a name table.
    pub fn lookup(&self, table: &HashMap<&str, usize>, what: &str) -> Result<usize, ParseError> {
        table.get(self.text).copied().ok_or_else(|| self.err(format!("unknown {what} `{}`", self.text)))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub keyword: Token<'a>,
    pub args: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn arity(&self, n: usize) -> Result<&[Token<'a>], ParseError> {
        if self.args.len() != n {
            let at = self.args.get(n).unwrap_or(&self.keyword);
            return Err(at.err(format!("`{}` takes {n} argument(s), found {}", self.keyword.text, self.args.len())));
        }
        Ok(&self.args)
    }

    pub fn at_least(&self, n: usize) -> Result<&[Token<'a>], ParseError> {
        if self.args.len() < n {
            return Err(self.keyword.err(format!("`{}` takes at least {n} argument(s)", self.keyword.text)));
        }
        Ok(&self.args)
    }
}

/// Nonblank lines with comments removed.
pub(crate) struct Document<'a> {
    pub lines: Vec<Line<'a>>,
    end: usize,
}

impl<'a> Document<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut end = 1;
        for (i, raw) in text.lines().enumerate() {
            end = i + 2;
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (col, (byte, c)) in body.char_indices().enumerate() {
                match (c.is_whitespace(), start) {
                    (false, None) => start = Some((byte, col)),
                    (true, Some((b, sc))) => {
                        tokens.push(Token { text: &body[b..byte], line: i + 1, column: sc + 1 });
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some((b, sc)) = start {
                tokens.push(Token { text: &body[b..], line: i + 1, column: sc + 1 });
            }
            if let Some((keyword, args)) = tokens.split_first() {
                lines.push(Line { keyword: *keyword, args: args.to_vec() });
            }
        }
        Document { lines, end }
    }

    /// Error positioned just past the last line.
    pub fn missing(&self, what: &str) -> ParseError {
        ParseError::Syntax { line: self.end, column: 1, message: format!("missing `{what}` line") }
    }

    /// The single line with `keyword`, if any; a repeated header is an error.
    pub fn header(&self, keyword: &str) -> Result<Option<&Line<'a>>, ParseError> {
        let mut found = self.lines.iter().filter(|l| l.keyword.text == keyword);
        let first = found.next();
        if let Some(again) = found.next() {
            return Err(again.keyword.err(format!("duplicate `{keyword}` line")));
        }
        Ok(first)
    }

    pub fn required(&self, keyword: &str) -> Result<&Line<'a>, ParseError> {
        self.header(keyword)?.ok_or_else(|| self.missing(keyword))
    }

    /// Fails on the first line whose keyword is not in `known`.
    pub fn only(&self, known: &[&str]) -> Result<(), ParseError> {
        match self.lines.iter().find(|l| !known.contains(&l.keyword.text)) {
            Some(l) => Err(l.keyword.err(format!("unknown keyword `{}`", l.keyword.text))),
            None => Ok(()),
        }
    }

    pub fn with<'s>(&'s self, keyword: &'s str) -> impl Iterator<Item = &'s Line<'a>> + 's {
        self.lines.iter().filter(move |l| l.keyword.text == keyword)
    }

    /// Checks that the document starts with `keyword`.
    pub fn starts_with(&self, keyword: &str) -> Result<(), ParseError> {
        match self.lines.first() {
            Some(l) if l.keyword.text == keyword => Ok(()),
            Some(l) => Err(l.keyword.err(format!("expected the document to start with `{keyword}`"))),
            None => Err(self.missing(keyword)),
        }
    }
}

/// Name table for a declaration list; duplicates are reported at the token.
pub(crate) fn names<'a>(tokens: &[Token<'a>], what: &str) -> Result<HashMap<&'a str, usize>, ParseError> {
    let mut table = HashMap::new();
    for t in tokens {
        if table.insert(t.text, table.len()).is_some() {
            return Err(t.err(format!("duplicate {what} `{}`", t.text)));
        }
    }
    Ok(table)
}
