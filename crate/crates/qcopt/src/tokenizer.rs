//! Byte-pair-encoding tokenizer with a loadable vocabulary.
//!
//! Vocabularies use the public interchange format: one `<base64 bytes>
//! <rank>` line per token, with ranks doubling as token ids and as merge
//! priorities. Text is first split into chunks by the vocabulary's
//! pre-tokenization pattern (the cl100k-family pattern by default), then
//! each chunk is merged greedily: the adjacent pair whose concatenation has
//! the lowest rank merges first, leftmost on ties. Every single byte must be
//! present in the vocabulary, which makes encoding total.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use base64::Engine as _;
use serde::Deserialize;

/// Pre-tokenization pattern of the cl100k-family vocabularies. Used when a
/// raw rank file is loaded without a config that overrides it.
pub const DEFAULT_PRETOKEN_PATTERN: &str = r"'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}+|\p{N}{1,3}| ?[^\s\p{L}\p{N}]++[\r\n]*|\s*[\r\n]|\s+(?!\S)|\s+";

#[derive(Debug, thiserror::Error)]
pub enum TokenizerError {
    #[error("vocabulary line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("vocabulary line {line}: duplicate rank {rank}")]
    DuplicateRank { line: usize, rank: u32 },
    #[error("vocabulary `{name}`: no single-byte coverage (byte {byte:#04x} missing)")]
    MissingByte { name: String, byte: u8 },
    #[error("invalid pre-tokenization pattern: {0}")]
    BadPattern(String),
    #[error("unknown token id {0}")]
    UnknownTokenId(u32),
    #[error("decoded bytes are not valid UTF-8: {0}")]
    InvalidUtf8(#[from] std::string::FromUtf8Error),
    #[error("failed to read vocabulary: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse vocabulary config: {0}")]
    Config(#[from] serde_json::Error),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabConfig {
    name: String,
    #[serde(default)]
    pattern: Option<String>,
    ranks_file: String,
    #[serde(default)]
    special_tokens: BTreeMap<String, u32>,
}

/// An immutable BPE vocabulary: byte-sequence ranks, the inverse map, the
/// pre-tokenization pattern, and any reserved special tokens.
pub struct TokenVocabulary {
    name: String,
    ranks: HashMap<Vec<u8>, u32>,
    decoder: HashMap<u32, Vec<u8>>,
    special_tokens: BTreeMap<String, u32>,
    pattern: fancy_regex::Regex,
    pattern_str: String,
}

impl std::fmt::Debug for TokenVocabulary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TokenVocabulary")
            .field("name", &self.name)
            .field("entries", &self.ranks.len())
            .finish()
    }
}

impl TokenVocabulary {
    pub fn from_entries(
        name: &str,
        entries: Vec<(Vec<u8>, u32)>,
        pattern: &str,
        special_tokens: BTreeMap<String, u32>,
    ) -> Result<Self, TokenizerError> {
        let mut ranks = HashMap::with_capacity(entries.len());
        let mut decoder = HashMap::with_capacity(entries.len());
        for (line, (bytes, rank)) in entries.into_iter().enumerate() {
            if decoder.contains_key(&rank) {
                return Err(TokenizerError::DuplicateRank {
                    line: line + 1,
                    rank,
                });
            }
            decoder.insert(rank, bytes.clone());
            ranks.insert(bytes, rank);
        }
        for byte in 0u8..=255 {
            if !ranks.contains_key(&vec![byte][..]) {
                return Err(TokenizerError::MissingByte {
                    name: name.to_string(),
                    byte,
                });
            }
        }
        let pattern_re = fancy_regex::Regex::new(pattern)
            .map_err(|e| TokenizerError::BadPattern(e.to_string()))?;
        Ok(TokenVocabulary {
            name: name.to_string(),
            ranks,
            decoder,
            special_tokens,
            pattern: pattern_re,
            pattern_str: pattern.to_string(),
        })
    }

    /// Parse the `<base64> <rank>` line format.
    pub fn from_tiktoken_str(
        name: &str,
        raw: &str,
        pattern: &str,
        special_tokens: BTreeMap<String, u32>,
    ) -> Result<Self, TokenizerError> {
        let mut entries = Vec::new();
        for (idx, line) in raw.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(b64), Some(rank_str), None) =
                (fields.next(), fields.next(), fields.next())
            else {
                return Err(TokenizerError::MalformedLine {
                    line: line_no,
                    reason: "expected `<base64> <rank>`".to_string(),
                });
            };
            let bytes = base64::engine::general_purpose::STANDARD
                .decode(b64)
                .map_err(|e| TokenizerError::MalformedLine {
                    line: line_no,
                    reason: format!("bad base64: {e}"),
                })?;
            let rank: u32 = rank_str
                .parse()
                .map_err(|e| TokenizerError::MalformedLine {
                    line: line_no,
                    reason: format!("bad rank: {e}"),
                })?;
            entries.push((bytes, rank));
        }
        Self::from_entries(name, entries, pattern, special_tokens)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn pattern_str(&self) -> &str {
        &self.pattern_str
    }

    pub fn special_tokens(&self) -> &BTreeMap<String, u32> {
        &self.special_tokens
    }

    /// The small bundled vocabulary used by unit tests and as the CLI
    /// fallback when no vocabulary path is configured.
    pub fn builtin() -> &'static TokenVocabulary {
        static BUILTIN: OnceLock<TokenVocabulary> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            let config: VocabConfig =
                serde_json::from_str(include_str!("../data/test_vocab.json"))
                    .expect("bundled vocab config");
            TokenVocabulary::from_tiktoken_str(
                &config.name,
                include_str!("../data/test_vocab.tiktoken"),
                config.pattern.as_deref().unwrap_or(DEFAULT_PRETOKEN_PATTERN),
                config.special_tokens,
            )
            .expect("bundled vocab")
        })
    }
}

/// Load a vocabulary from disk. A `.json` path is read as a config naming
/// the rank file (and optionally the pattern and special tokens); any other
/// path is read directly as a rank file with the default pattern.
pub fn load_vocabulary(path: &Path) -> Result<TokenVocabulary, TokenizerError> {
    if path.extension().is_some_and(|e| e == "json") {
        let raw = std::fs::read_to_string(path)?;
        let config: VocabConfig = serde_json::from_str(&raw)?;
        let ranks_path = path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(&config.ranks_file);
        let ranks_raw = std::fs::read_to_string(&ranks_path)?;
        TokenVocabulary::from_tiktoken_str(
            &config.name,
            &ranks_raw,
            config.pattern.as_deref().unwrap_or(DEFAULT_PRETOKEN_PATTERN),
            config.special_tokens,
        )
    } else {
        let raw = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "vocabulary".to_string());
        TokenVocabulary::from_tiktoken_str(
            &name,
            &raw,
            DEFAULT_PRETOKEN_PATTERN,
            BTreeMap::new(),
        )
    }
}

/// Resolves tokenizer ids to vocabularies; models without an id fall back
/// to the default vocabulary.
#[derive(Debug, Default)]
pub struct VocabRegistry {
    default: Option<TokenVocabulary>,
    by_id: BTreeMap<String, TokenVocabulary>,
}

impl VocabRegistry {
    pub fn with_default(vocab: TokenVocabulary) -> Self {
        VocabRegistry {
            default: Some(vocab),
            by_id: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, id: &str, vocab: TokenVocabulary) {
        self.by_id.insert(id.to_string(), vocab);
    }

    pub fn resolve(&self, id: Option<&str>) -> Option<&TokenVocabulary> {
        match id {
            Some(id) => self.by_id.get(id).or(self.default.as_ref()),
            None => self.default.as_ref(),
        }
    }
}

fn byte_pair_merge(piece: &[u8], vocab: &TokenVocabulary, out: &mut Vec<u32>) {
    // (start, end) byte ranges of the current parts.
    let mut parts: Vec<(usize, usize)> = (0..piece.len()).map(|i| (i, i + 1)).collect();
    loop {
        let mut best: Option<(usize, u32)> = None;
        for i in 0..parts.len().saturating_sub(1) {
            let cand = &piece[parts[i].0..parts[i + 1].1];
            if let Some(&rank) = vocab.ranks.get(cand) {
                if best.is_none_or(|(_, r)| rank < r) {
                    best = Some((i, rank));
                }
            }
        }
        let Some((idx, _)) = best else { break };
        parts[idx] = (parts[idx].0, parts[idx + 1].1);
        parts.remove(idx + 1);
    }
    out.extend(
        parts
            .iter()
            .map(|&(s, e)| *vocab.ranks.get(&piece[s..e]).expect("single bytes covered")),
    );
}

fn encode_piece(piece: &[u8], vocab: &TokenVocabulary, out: &mut Vec<u32>) {
    if piece.is_empty() {
        return;
    }
    if let Some(&rank) = vocab.ranks.get(piece) {
        out.push(rank);
        return;
    }
    byte_pair_merge(piece, vocab, out);
}

/// Deterministic BPE encoding. Total on any input: bytes not covered by the
/// pre-tokenization pattern fall back to byte-level merging.
pub fn encode(text: &str, vocab: &TokenVocabulary) -> Vec<u32> {
    let mut out = Vec::new();
    let mut cursor = 0;
    let mut it = vocab.pattern.find_iter(text);
    loop {
        match it.next() {
            Some(Ok(m)) => {
                if m.start() > cursor {
                    encode_piece(text[cursor..m.start()].as_bytes(), vocab, &mut out);
                }
                encode_piece(m.as_str().as_bytes(), vocab, &mut out);
                cursor = m.end();
            }
            // Backtracking overrun: fall back to byte merging for the rest.
            Some(Err(_)) | None => break,
        }
    }
    if cursor < text.len() {
        encode_piece(text[cursor..].as_bytes(), vocab, &mut out);
    }
    out
}

/// Concatenated token bytes.
pub fn decode_bytes(tokens: &[u32], vocab: &TokenVocabulary) -> Result<Vec<u8>, TokenizerError> {
    let mut out = Vec::new();
    for &id in tokens {
        let bytes = vocab
            .decoder
            .get(&id)
            .ok_or(TokenizerError::UnknownTokenId(id))?;
        out.extend_from_slice(bytes);
    }
    Ok(out)
}

/// Decode to text; errors when the concatenated bytes are not valid UTF-8
/// (possible for arbitrary token sequences, never for `encode` output).
pub fn decode(tokens: &[u32], vocab: &TokenVocabulary) -> Result<String, TokenizerError> {
    Ok(String::from_utf8(decode_bytes(tokens, vocab)?)?)
}

pub fn count_tokens(text: &str, vocab: &TokenVocabulary) -> u64 {
    encode(text, vocab).len() as u64
}
