//! Words in free groups and surface groups.
//!
//! Generators are lowercase ASCII letters; an uppercase letter is the inverse
//! of its lowercase generator, so `"aB"` is `a·b⁻¹`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub label: char,
    pub inverse: bool,
}

impl Letter {
    pub fn new(label: char, inverse: bool) -> Self {
        Self { label, inverse }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if c.is_ascii_lowercase() {
            Ok(Self::new(c, false))
        } else if c.is_ascii_uppercase() {
            Ok(Self::new(c.to_ascii_lowercase(), true))
        } else {
            Err(Error::InvalidWord(c.to_string()))
        }
    }

    pub fn to_char(self) -> char {
        if self.inverse {
            self.label.to_ascii_uppercase()
        } else {
            self.label
        }
    }

    pub fn inv(self) -> Self {
        Self::new(self.label, !self.inverse)
    }

    fn key(self) -> (char, bool) {
        (self.label, self.inverse)
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A word in the generators. No reduction is applied implicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::empty());
        }
        let letters = s
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::InvalidWord(s.to_string()))?;
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let r = self.reduced().letters;
        let mut i = 0;
        let mut j = r.len();
        while j >= i + 2 && r[i] == r[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word {
            letters: r[i..j].to_vec(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(a), Some(b)) => self.len() == 1 || *a != b.inv(),
                _ => true,
            }
    }

    /// Cyclic rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Lexicographically least rotation of the word and of its inverse, after
    /// cyclic reduction. Two words have the same canonical form iff they are
    /// conjugate up to inversion.
    pub fn canonical(&self) -> Word {
        let w = self.cyclically_reduced();
        if w.is_empty() {
            return w;
        }
        let a = least_rotation(&w.letters);
        let b = least_rotation(&w.inverse().letters);
        Word {
            letters: std::cmp::min(a, b),
        }
    }

    /// Smallest `p` such that the cyclic word is a power of a word of length
    /// `p`.
    pub fn cyclic_period(&self) -> usize {
        let n = self.len();
        for p in 1..=n {
            if n.is_multiple_of(p) && (p..n).all(|i| self.letters[i] == self.letters[i - p]) {
                return p;
            }
        }
        n
    }

    /// Not a proper power (as a cyclic word). The empty word is not primitive.
    pub fn is_primitive(&self) -> bool {
        let w = self.cyclically_reduced();
        !w.is_empty() && w.cyclic_period() == w.len()
    }

    /// Count of letters with the given labels, with multiplicity.
    pub fn count_labels(&self, labels: &[char]) -> usize {
        self.letters.iter().filter(|l| labels.contains(&l.label)).count()
    }

    /// Replaces every generator by a word (inverse letters use the inverse
    /// image). Labels without an image are kept.
    pub fn substitute(&self, image: &dyn Fn(char) -> Option<Word>) -> Word {
        let mut letters = Vec::new();
        for &l in &self.letters {
            match image(l.label) {
                Some(w) => {
                    let w = if l.inverse { w.inverse() } else { w };
                    letters.extend_from_slice(&w.letters);
                }
                None => letters.push(l),
            }
        }
        Word { letters }.reduced()
    }
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    let mut best = 0;
    for k in 1..n {
        for i in 0..n {
            match w[(k + i) % n].cmp(&w[(best + i) % n]) {
                Ordering::Less => {
                    best = k;
                    break;
                }
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    let mut out = w[best..].to_vec();
    out.extend_from_slice(&w[..best]);
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

/// All canonical primitive cyclic words of length `1..=budget` over the given
/// generators, ordered by length then lexicographically.
pub fn word_classes(generators: &[char], budget: usize) -> Vec<Word> {
    let mut alphabet: Vec<Letter> = generators
        .iter()
        .flat_map(|&c| [Letter::new(c, false), Letter::new(c, true)])
        .collect();
    alphabet.sort();
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    for len in 1..=budget {
        extend_classes(&alphabet, len, &mut stack, &mut out);
    }
    out
}

fn extend_classes(alphabet: &[Letter], len: usize, stack: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if stack.len() == len {
        let w = Word::from_letters(stack.clone());
        if w.is_cyclically_reduced() && w.cyclic_period() == len && w.canonical() == w {
            out.push(w);
        }
        return;
    }
    for &l in alphabet {
        if let Some(&last) = stack.last() {
            if last == l.inv() {
                continue;
            }
        }
        // A canonical word starts with its least letter.
        if let Some(&first) = stack.first() {
            if l < first || l.inv() < first {
                continue;
            }
        }
        stack.push(l);
        extend_classes(alphabet, len, stack, out);
        stack.pop();
    }
}
