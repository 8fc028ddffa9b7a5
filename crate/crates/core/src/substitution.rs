//! Substitutions on a finite alphabet of arcs or branches, their incidence
//! matrices, and the entropy enclosure they induce.
//!
//! Row convention: entry `(i, j)` counts occurrences of symbol `j` in the
//! image of symbol `i`, so the incidence matrix of `σ^k` is `M^k`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use thiserror::Error;

use crate::intmatrix::NonNegIntMatrix;
use crate::spectral::{spectral_radius, SpectralError, SpectralInterval};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubstitutionError {
    #[error("symbol `{symbol}` in the image of `{rule}` is not in the alphabet")]
    UnknownSymbol { symbol: String, rule: String },
    #[error("symbol `{0}` is defined more than once")]
    DuplicateSymbol(String),
    #[error("`{0}` is not an alphanumeric symbol name")]
    InvalidName(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("substitution has an empty alphabet")]
    EmptyAlphabet,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Vec<String>,
    images: Vec<Vec<usize>>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(char::is_alphanumeric)
}

impl Substitution {
    /// Builds from `(symbol, image word)` rules; the alphabet order is the rule order.
    pub fn new<S: AsRef<str>>(rules: &[(S, Vec<S>)]) -> Result<Self, SubstitutionError> {
        let mut index = HashMap::new();
        let mut alphabet = Vec::with_capacity(rules.len());
        for (name, _) in rules {
            let name = name.as_ref();
            if !valid_name(name) {
                return Err(SubstitutionError::InvalidName(name.to_string()));
            }
            if index.insert(name.to_string(), alphabet.len()).is_some() {
                return Err(SubstitutionError::DuplicateSymbol(name.to_string()));
            }
            alphabet.push(name.to_string());
        }
        let images = rules
            .iter()
            .map(|(rule, word)| {
                word.iter()
                    .map(|s| {
                        index.get(s.as_ref()).copied().ok_or_else(|| SubstitutionError::UnknownSymbol {
                            symbol: s.as_ref().to_string(),
                            rule: rule.as_ref().to_string(),
                        })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { alphabet, images })
    }

    /// Builds from images given as alphabet positions.
    pub fn from_indices(alphabet: Vec<String>, images: Vec<Vec<usize>>) -> Result<Self, SubstitutionError> {
        if alphabet.len() != images.len() {
            return Err(SubstitutionError::Syntax {
                line: 0,
                message: format!("{} symbols but {} images", alphabet.len(), images.len()),
            });
        }
        let rules: Vec<(String, Vec<String>)> = alphabet
            .iter()
            .zip(&images)
            .map(|(name, word)| {
                let word =
                    word.iter().map(|&k| alphabet.get(k).cloned().unwrap_or_else(|| format!("#{}", k + 1))).collect();
                (name.clone(), word)
            })
            .collect();
        Self::new(&rules)
    }

    /// Parses `name -> w1 w2 ...` rules, one per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SubstitutionError> {
        let mut rules = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| SubstitutionError::Syntax { line: lineno + 1, message: message.to_string() };
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| syntax("expected `name -> word`"))?;
            let lhs = lhs.trim();
            if lhs.split_whitespace().count() != 1 {
                return Err(syntax("left-hand side must be a single symbol"));
            }
            if rhs.contains("->") {
                return Err(syntax("more than one `->`"));
            }
            rules.push((lhs.to_string(), rhs.split_whitespace().map(str::to_string).collect::<Vec<_>>()));
        }
        Self::new(&rules)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn image(&self, symbol: usize) -> &[usize] {
        &self.images[symbol]
    }

    /// Image of a word, letter by letter.
    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&s| self.images[s].iter().copied()).collect()
    }

    /// `σ^depth`; depth 0 is the identity substitution.
    pub fn iterate(&self, depth: u32) -> Self {
        let mut images: Vec<Vec<usize>> = (0..self.len()).map(|s| vec![s]).collect();
        for _ in 0..depth {
            images = images.iter().map(|w| self.apply(w)).collect();
        }
        Self { alphabet: self.alphabet.clone(), images }
    }

    pub fn is_permutation(&self) -> bool {
        let mut hit = vec![false; self.len()];
        self.images.iter().all(|w| w.len() == 1 && !std::mem::replace(&mut hit[w[0]], true))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, word) in self.alphabet.iter().zip(&self.images) {
            let word: Vec<&str> = word.iter().map(|&s| self.alphabet[s].as_str()).collect();
            writeln!(f, "{name} -> {}", word.join(" "))?;
        }
        Ok(())
    }
}

/// `m_ij` = number of occurrences of symbol `j` in the image of symbol `i`.
pub fn incidence_matrix(sub: &Substitution) -> Result<NonNegIntMatrix, SubstitutionError> {
    let n = sub.len();
    if n == 0 {
        return Err(SubstitutionError::EmptyAlphabet);
    }
    let mut counts = vec![vec![0u64; n]; n];
    for (i, word) in sub.images.iter().enumerate() {
        for &j in word {
            counts[i][j] += 1;
        }
    }
    Ok(NonNegIntMatrix::from_fn(n, |i, j| BigUint::from(counts[i][j])).expect("n >= 1"))
}

/// Enclosure of the stretch factor `exp(h)`; the entropy is its logarithm.
pub fn entropy_interval(sub: &Substitution, gap: &BigRational) -> Result<SpectralInterval, SubstitutionError> {
    Ok(spectral_radius(&incidence_matrix(sub)?, gap)?)
}

/// Whether an alphabet of this size fits under the arc cap `3|χ|`.
pub fn arc_count_admissible(sub: &Substitution, chi_abs: u64) -> bool {
    (sub.len() as u64) <= chi_abs.saturating_mul(3)
}
