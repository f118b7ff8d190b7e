//! List-based steganography: a secret byte stream hidden as an innocuous
//! playlist. Each byte becomes two song titles via the initial letters
//! `a`..`p` (one per nibble, high first); a title starting with `z`
//! terminates the message, and anything after it is decoy padding. Decoding
//! needs no access to the generating bank.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// The sixteen nibble letters.
pub const CODE_LETTERS: [char; 16] =
    ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p'];
/// Terminator initial.
pub const TERMINATOR: char = 'z';

#[derive(Debug, Error)]
pub enum ListegaError {
    #[error("song bank is empty")]
    EmptyBank,
    #[error("song bank lacks titles for initial(s): {}", missing.iter().collect::<String>())]
    InadequateBank { missing: Vec<char> },
    #[error("cover line {line} has initial {found:?}, outside the code alphabet")]
    InvalidCodeLetter { line: usize, found: Option<char> },
    #[error("terminator after an unpaired nibble letter")]
    OddNibbleCount,
    #[error("cover ended without a terminator line")]
    MissingTerminator,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Pool of legitimate titles, indexed by normalized initial letter (first
/// alphabetic character, lowercased). Construction enforces adequacy: at
/// least one title per code letter and for the terminator.
#[derive(Debug, Clone)]
pub struct SongBank {
    entries: Vec<String>,
    index: BTreeMap<char, Vec<usize>>,
}

impl SongBank {
    pub fn from_titles(titles: Vec<String>) -> Result<Self, ListegaError> {
        let entries: Vec<String> = titles
            .into_iter()
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty() && !t.starts_with('#'))
            .collect();
        if entries.is_empty() {
            return Err(ListegaError::EmptyBank);
        }
        let mut index: BTreeMap<char, Vec<usize>> = BTreeMap::new();
        for (i, title) in entries.iter().enumerate() {
            if let Some(initial) = normalized_initial(title) {
                index.entry(initial).or_default().push(i);
            }
        }
        let missing: Vec<char> = CODE_LETTERS
            .iter()
            .chain(std::iter::once(&TERMINATOR))
            .copied()
            .filter(|c| !index.contains_key(c))
            .collect();
        if !missing.is_empty() {
            return Err(ListegaError::InadequateBank { missing });
        }
        Ok(Self { entries, index })
    }

    /// Load from a UTF-8 text file, one title per line; `#` lines are
    /// comments.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ListegaError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_titles(text.lines().map(str::to_string).collect())
    }

    pub fn titles(&self) -> &[String] {
        &self.entries
    }

    pub fn contains(&self, title: &str) -> bool {
        self.entries.iter().any(|t| t == title)
    }

    fn bucket(&self, letter: char) -> &[usize] {
        self.index.get(&letter).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// The generated playlist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListCover {
    pub lines: Vec<String>,
}

impl ListCover {
    pub fn serialize(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Self {
        Self { lines: text.lines().map(str::to_string).collect() }
    }
}

pub fn normalized_initial(title: &str) -> Option<char> {
    title.chars().find(|c| c.is_alphabetic()).and_then(|c| c.to_lowercase().next())
}

/// Encode payload bytes as code letters: two letters per byte (high nibble
/// first) plus the terminator.
pub fn encode_message(payload: &[u8]) -> String {
    let mut out = String::with_capacity(payload.len() * 2 + 1);
    for &b in payload {
        out.push(CODE_LETTERS[(b >> 4) as usize]);
        out.push(CODE_LETTERS[(b & 0x0F) as usize]);
    }
    out.push(TERMINATOR);
    out
}

/// Camouflage the payload as a playlist: one bank title per code letter,
/// chosen by a seeded deterministic PRNG. Immediately repeated titles are
/// avoided whenever the letter's bucket offers an alternative. Cover length
/// is exactly 2 * payload bytes + 1.
pub fn generate_cover(payload: &[u8], bank: &SongBank, seed: u64) -> ListCover {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines: Vec<String> = Vec::with_capacity(payload.len() * 2 + 1);
    for letter in encode_message(payload).chars() {
        let bucket = bank.bucket(letter);
        debug_assert!(!bucket.is_empty(), "bank adequacy enforced at construction");
        let fresh: Vec<usize> = match lines.last() {
            Some(prev) => {
                bucket.iter().copied().filter(|&i| &bank.entries[i] != prev).collect()
            }
            None => bucket.to_vec(),
        };
        let pool = if fresh.is_empty() { bucket } else { &fresh };
        let pick = pool[rng.random_range(0..pool.len())];
        lines.push(bank.entries[pick].clone());
    }
    ListCover { lines }
}

/// Recover the payload from a cover: read normalized initials up to the
/// first terminator, pair the nibble letters into bytes. Lines after the
/// terminator are decoys and ignored.
pub fn decode_cover(lines: &[String]) -> Result<Vec<u8>, ListegaError> {
    let mut nibbles: Vec<u8> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let initial = normalized_initial(line);
        match initial {
            Some(c) if c == TERMINATOR => {
                if !nibbles.len().is_multiple_of(2) {
                    return Err(ListegaError::OddNibbleCount);
                }
                return Ok(nibbles.chunks_exact(2).map(|p| (p[0] << 4) | p[1]).collect());
            }
            Some(c) if ('a'..='p').contains(&c) => nibbles.push(c as u8 - b'a'),
            other => return Err(ListegaError::InvalidCodeLetter { line: i + 1, found: other }),
        }
    }
    Err(ListegaError::MissingTerminator)
}
