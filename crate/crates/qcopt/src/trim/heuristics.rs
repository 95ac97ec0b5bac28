//! The eight deterministic token-reduction heuristics.
//!
//! Every heuristic walks its units (words, paren pairs, punctuation marks,
//! acronym runs) left to right and commits a unit edit only when the token
//! count of the whole sentence strictly drops. A heuristic application can
//! therefore never increase a sentence's token count, and returning the
//! input unchanged is the universal no-op.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use crate::tokenizer::{count_tokens, TokenVocabulary};
use crate::trim::stemmer;
use crate::trim::TrimError;

/// Heuristic identifiers, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum HeuristicId {
    /// Adjust spaces and capitalization of selected words.
    Cs,
    /// Replace words with cheaper near-synonyms.
    Rs,
    /// Stem words, then repair against the word list.
    Ls,
    /// Remove round parentheses.
    Rb,
    /// Split compound words after a known prefix.
    Hc,
    /// Remove selective stop words.
    Rsw,
    /// Remove selective punctuation marks.
    Rp,
    /// Collapse dotted acronyms.
    Ra,
}

impl HeuristicId {
    pub const ALL: [HeuristicId; 8] = [
        HeuristicId::Cs,
        HeuristicId::Rs,
        HeuristicId::Ls,
        HeuristicId::Rb,
        HeuristicId::Hc,
        HeuristicId::Rsw,
        HeuristicId::Rp,
        HeuristicId::Ra,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            HeuristicId::Cs => "CS",
            HeuristicId::Rs => "RS",
            HeuristicId::Ls => "LS",
            HeuristicId::Rb => "RB",
            HeuristicId::Hc => "HC",
            HeuristicId::Rsw => "RSW",
            HeuristicId::Rp => "RP",
            HeuristicId::Ra => "RA",
        }
    }

    pub fn parse(code: &str) -> Result<Self, TrimError> {
        match code.to_ascii_uppercase().as_str() {
            "CS" => Ok(HeuristicId::Cs),
            "RS" => Ok(HeuristicId::Rs),
            "LS" => Ok(HeuristicId::Ls),
            "RB" => Ok(HeuristicId::Rb),
            "HC" => Ok(HeuristicId::Hc),
            "RSW" => Ok(HeuristicId::Rsw),
            "RP" => Ok(HeuristicId::Rp),
            "RA" => Ok(HeuristicId::Ra),
            other => Err(TrimError::UnknownHeuristic(other.to_string())),
        }
    }
}

impl fmt::Display for HeuristicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Editable word data backing the heuristics. Defaults are bundled; each
/// list can be replaced from a file of the same format.
#[derive(Debug, Clone)]
pub struct Dictionaries {
    pub stopwords: BTreeSet<String>,
    pub punctuation: BTreeSet<char>,
    /// Longest first, so compound matching prefers the longest prefix.
    pub prefixes: Vec<String>,
    pub synonyms: BTreeMap<String, String>,
    pub words: BTreeSet<String>,
}

fn data_lines(raw: &str) -> impl Iterator<Item = &str> {
    raw.lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

impl Dictionaries {
    pub fn bundled() -> Self {
        let mut dicts = Dictionaries {
            stopwords: BTreeSet::new(),
            punctuation: BTreeSet::new(),
            prefixes: Vec::new(),
            synonyms: BTreeMap::new(),
            words: BTreeSet::new(),
        };
        dicts.load_stopwords_str(include_str!("../../data/stopwords.txt"));
        dicts.load_punctuation_str(include_str!("../../data/punctuation.txt"));
        dicts.load_prefixes_str(include_str!("../../data/prefixes.txt"));
        dicts.load_synonyms_str(include_str!("../../data/synonyms.tsv"));
        dicts.load_words_str(include_str!("../../data/wordlist.txt"));
        dicts
    }

    pub fn load_stopwords_str(&mut self, raw: &str) {
        self.stopwords = data_lines(raw).map(|l| l.to_ascii_lowercase()).collect();
    }

    pub fn load_punctuation_str(&mut self, raw: &str) {
        self.punctuation = data_lines(raw).filter_map(|l| l.chars().next()).collect();
    }

    pub fn load_prefixes_str(&mut self, raw: &str) {
        let mut prefixes: Vec<String> =
            data_lines(raw).map(|l| l.to_ascii_lowercase()).collect();
        prefixes.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        self.prefixes = prefixes;
    }

    pub fn load_synonyms_str(&mut self, raw: &str) {
        self.synonyms = data_lines(raw)
            .filter_map(|l| {
                let mut it = l.split('\t');
                Some((
                    it.next()?.trim().to_ascii_lowercase(),
                    it.next()?.trim().to_string(),
                ))
            })
            .collect();
    }

    pub fn load_words_str(&mut self, raw: &str) {
        self.words = data_lines(raw).map(|l| l.to_ascii_lowercase()).collect();
    }

    pub fn load_stopwords(&mut self, path: &Path) -> Result<(), TrimError> {
        self.load_stopwords_str(&std::fs::read_to_string(path)?);
        Ok(())
    }

    pub fn load_synonyms(&mut self, path: &Path) -> Result<(), TrimError> {
        self.load_synonyms_str(&std::fs::read_to_string(path)?);
        Ok(())
    }
}

impl Default for Dictionaries {
    fn default() -> Self {
        Dictionaries::bundled()
    }
}

/// Applies heuristics to sentences. Holds the dictionaries; the vocabulary
/// arrives per call so different model tokenizers can share one engine.
#[derive(Debug, Clone, Default)]
pub struct HeuristicEngine {
    dicts: Dictionaries,
}

/// Tracks the working sentence and commits only token-reducing edits.
struct EditScan<'a> {
    vocab: &'a TokenVocabulary,
    current: String,
    count: u64,
}

impl<'a> EditScan<'a> {
    fn new(sentence: &str, vocab: &'a TokenVocabulary) -> Self {
        EditScan {
            vocab,
            current: sentence.to_string(),
            count: count_tokens(sentence, vocab),
        }
    }

    /// Replace `range` with the best strictly-improving candidate; returns
    /// the new end-of-edit cursor position, or `None` if nothing improved.
    fn try_replace(&mut self, range: std::ops::Range<usize>, candidates: &[String]) -> Option<usize> {
        let mut best: Option<(u64, &String)> = None;
        for cand in candidates {
            if *cand == self.current[range.clone()] {
                continue;
            }
            let mut trial =
                String::with_capacity(self.current.len() + cand.len());
            trial.push_str(&self.current[..range.start]);
            trial.push_str(cand);
            trial.push_str(&self.current[range.end..]);
            let c = count_tokens(&trial, self.vocab);
            if c < self.count && best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, cand));
            }
        }
        let (count, cand) = best?;
        let mut next = String::with_capacity(self.current.len() + cand.len());
        next.push_str(&self.current[..range.start]);
        next.push_str(cand);
        next.push_str(&self.current[range.end..]);
        self.current = next;
        self.count = count;
        Some(range.start + cand.len())
    }
}

/// Next maximal alphabetic run at or after `from`.
fn next_word(text: &str, from: usize) -> Option<(usize, usize)> {
    let rest = &text[from..];
    let start_rel = rest.find(|c: char| c.is_alphabetic())?;
    let start = from + start_rel;
    let end = text[start..]
        .find(|c: char| !c.is_alphabetic())
        .map(|off| start + off)
        .unwrap_or(text.len());
    Some((start, end))
}

fn capitalize_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn lowercase_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

impl HeuristicEngine {
    pub fn new(dicts: Dictionaries) -> Self {
        HeuristicEngine { dicts }
    }

    pub fn dictionaries(&self) -> &Dictionaries {
        &self.dicts
    }

    /// Apply one heuristic; returns the rewritten sentence and the tokens
    /// saved. The result never has more tokens than the input.
    pub fn apply(
        &self,
        id: HeuristicId,
        sentence: &str,
        vocab: &TokenVocabulary,
    ) -> (String, u64) {
        let before = count_tokens(sentence, vocab);
        let after = self.transform(id, sentence, vocab);
        let after_count = count_tokens(&after, vocab);
        if after_count > before {
            return (sentence.to_string(), 0);
        }
        (after, before - after_count)
    }

    fn transform(&self, id: HeuristicId, sentence: &str, vocab: &TokenVocabulary) -> String {
        match id {
            HeuristicId::Cs => self.adjust_case_and_spaces(sentence, vocab),
            HeuristicId::Rs => self.replace_synonyms(sentence, vocab),
            HeuristicId::Ls => self.stem_words(sentence, vocab),
            HeuristicId::Rb => self.remove_brackets(sentence, vocab),
            HeuristicId::Hc => self.split_compounds(sentence, vocab),
            HeuristicId::Rsw => self.remove_stopwords(sentence, vocab),
            HeuristicId::Rp => self.remove_punctuation(sentence, vocab),
            HeuristicId::Ra => self.collapse_acronyms(sentence, vocab),
        }
    }

    /// CS: per word, try a case flip of the first letter; for the
    /// sentence-initial word also try prepending a space (with and without
    /// lowercasing), since many vocabularies merge space-prefixed words
    /// into single tokens.
    fn adjust_case_and_spaces(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        while let Some((start, end)) = next_word(&scan.current, cursor) {
            let word = scan.current[start..end].to_string();
            let first_upper = word.chars().next().is_some_and(|c| c.is_uppercase());
            let flipped = if first_upper {
                lowercase_first(&word)
            } else {
                capitalize_first(&word)
            };
            let mut candidates = Vec::new();
            if start == 0 {
                candidates.push(format!(" {}", lowercase_first(&word)));
                candidates.push(format!(" {word}"));
            }
            candidates.push(flipped);
            cursor = scan.try_replace(start..end, &candidates).unwrap_or(end);
        }
        scan.current
    }

    /// RS: swap dictionary words for cheaper near-synonyms.
    fn replace_synonyms(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        while let Some((start, end)) = next_word(&scan.current, cursor) {
            let word = scan.current[start..end].to_string();
            let lower = word.to_lowercase();
            let mut candidates = Vec::new();
            if let Some(replacement) = self.dicts.synonyms.get(&lower) {
                let styled = if word.chars().next().is_some_and(|c| c.is_uppercase()) {
                    capitalize_first(replacement)
                } else {
                    replacement.clone()
                };
                candidates.push(styled);
            }
            cursor = scan.try_replace(start..end, &candidates).unwrap_or(end);
        }
        scan.current
    }

    /// LS: stem, then spell-repair against the word list. Only repaired
    /// words that exist in the list are eligible.
    fn stem_words(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        while let Some((start, end)) = next_word(&scan.current, cursor) {
            let word = scan.current[start..end].to_string();
            let lower = word.to_lowercase();
            let mut candidates = Vec::new();
            if lower.len() >= 4 && lower.bytes().all(|b| b.is_ascii_lowercase()) {
                let stem = stemmer::stem(&lower);
                let mut repairs = vec![stem.clone(), format!("{stem}e")];
                if let Some(base) = stem.strip_suffix('i') {
                    repairs.push(format!("{base}y"));
                }
                for repair in repairs {
                    if repair.len() >= 2 && repair != lower && self.dicts.words.contains(&repair)
                    {
                        let styled = if word.chars().next().is_some_and(|c| c.is_uppercase()) {
                            capitalize_first(&repair)
                        } else {
                            repair.clone()
                        };
                        if !candidates.contains(&styled) {
                            candidates.push(styled);
                        }
                    }
                }
            }
            cursor = scan.try_replace(start..end, &candidates).unwrap_or(end);
        }
        scan.current
    }

    /// RB: drop matched round parentheses, keeping their contents.
    fn remove_brackets(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        loop {
            let Some(open_rel) = scan.current[cursor..].find('(') else {
                break;
            };
            let open = cursor + open_rel;
            let mut depth = 0;
            let mut close = None;
            for (off, c) in scan.current[open..].char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            close = Some(open + off);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let Some(close) = close else {
                cursor = open + 1;
                continue;
            };
            let inner = scan.current[open + 1..close].to_string();
            match scan.try_replace(open..close + 1, &[inner]) {
                Some(_) => cursor = open,
                None => cursor = open + 1,
            }
        }
        scan.current
    }

    /// HC: split unknown compounds after a known prefix when the remainder
    /// is a word on its own.
    fn split_compounds(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        while let Some((start, end)) = next_word(&scan.current, cursor) {
            let word = scan.current[start..end].to_string();
            let lower = word.to_lowercase();
            let mut candidates = Vec::new();
            if !self.dicts.words.contains(&lower) {
                for prefix in &self.dicts.prefixes {
                    if lower.len() > prefix.len() + 2 && lower.starts_with(prefix.as_str()) {
                        let remainder = &lower[prefix.len()..];
                        if self.dicts.words.contains(remainder) {
                            let head = &word[..prefix.len()];
                            candidates.push(format!("{head} {remainder}"));
                            break;
                        }
                    }
                }
            }
            cursor = scan.try_replace(start..end, &candidates).unwrap_or(end);
        }
        scan.current
    }

    /// RSW: drop stop words together with one adjacent space.
    fn remove_stopwords(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        while let Some((start, end)) = next_word(&scan.current, cursor) {
            let word = scan.current[start..end].to_lowercase();
            if !self.dicts.stopwords.contains(&word) {
                cursor = end;
                continue;
            }
            let bytes = scan.current.as_bytes();
            let range = if start > 0 && bytes[start - 1] == b' ' {
                start - 1..end
            } else if end < bytes.len() && bytes[end] == b' ' {
                start..end + 1
            } else {
                start..end
            };
            cursor = match scan.try_replace(range.clone(), &[String::new()]) {
                Some(next) => next,
                None => end,
            };
        }
        scan.current
    }

    /// RP: drop the allowed punctuation marks one by one.
    fn remove_punctuation(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        loop {
            let found = scan.current[cursor..]
                .char_indices()
                .find(|(_, c)| self.dicts.punctuation.contains(c));
            let Some((rel, c)) = found else { break };
            let start = cursor + rel;
            let end = start + c.len_utf8();
            cursor = scan
                .try_replace(start..end, &[String::new()])
                .unwrap_or(end);
        }
        scan.current
    }

    /// RA: collapse runs of dotted uppercase letters ("U.S.A." -> "USA").
    fn collapse_acronyms(&self, sentence: &str, vocab: &TokenVocabulary) -> String {
        let mut scan = EditScan::new(sentence, vocab);
        let mut cursor = 0;
        loop {
            let chars: Vec<(usize, char)> = scan.current[cursor..].char_indices().collect();
            let mut unit = None;
            let mut i = 0;
            while i < chars.len() {
                if !chars[i].1.is_uppercase() {
                    i += 1;
                    continue;
                }
                // Count (letter, dot) repetitions from here.
                let mut j = i;
                let mut letters = String::new();
                while j + 1 < chars.len()
                    && chars[j].1.is_uppercase()
                    && chars[j + 1].1 == '.'
                {
                    letters.push(chars[j].1);
                    j += 2;
                }
                if letters.chars().count() >= 2 {
                    let start = cursor + chars[i].0;
                    let end = cursor
                        + chars
                            .get(j)
                            .map(|&(p, _)| p)
                            .unwrap_or_else(|| scan.current.len() - cursor);
                    unit = Some((start, end, letters));
                    break;
                }
                i += 1;
            }
            let Some((start, end, letters)) = unit else { break };
            cursor = scan
                .try_replace(start..end, &[letters])
                .unwrap_or(end);
        }
        scan.current
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::TokenVocabulary;

    fn engine() -> HeuristicEngine {
        HeuristicEngine::default()
    }

    #[test]
    fn rb_no_parens_is_noop() {
        let vocab = TokenVocabulary::builtin();
        let (out, saved) = engine().apply(HeuristicId::Rb, "No brackets here.", vocab);
        assert_eq!(out, "No brackets here.");
        assert_eq!(saved, 0);
    }

    #[test]
    fn rsw_drops_stopwords_per_spec_example() {
        let vocab = TokenVocabulary::builtin();
        let mut dicts = Dictionaries::bundled();
        dicts.load_stopwords_str("the\non\n");
        let engine = HeuristicEngine::new(dicts);
        let (out, saved) = engine.apply(HeuristicId::Rsw, "the cat sat on the mat", vocab);
        assert_eq!(out, "cat sat mat");
        assert!(saved > 0);
    }

    #[test]
    fn ra_collapses_dotted_acronyms() {
        let vocab = TokenVocabulary::builtin();
        let (out, saved) = engine().apply(HeuristicId::Ra, "The U.S.A. team won the final.", vocab);
        assert_eq!(out, "The USA team won the final.");
        assert!(saved > 0);
    }

    #[test]
    fn ra_ignores_lowercase_dots() {
        let vocab = TokenVocabulary::builtin();
        let (out, _) = engine().apply(HeuristicId::Ra, "See e.g. the appendix.", vocab);
        assert_eq!(out, "See e.g. the appendix.");
    }

    #[test]
    fn hc_splits_only_listed_compounds() {
        let vocab = TokenVocabulary::builtin();
        let (out, _) = engine().apply(HeuristicId::Hc, "interest rates stay put", vocab);
        // "interest" is a dictionary word; it must not split.
        assert_eq!(out, "interest rates stay put");
    }

    #[test]
    fn no_heuristic_ever_increases_tokens() {
        let vocab = TokenVocabulary::builtin();
        let engine = engine();
        let samples = [
            "The team will utilize the new tools (the second batch) to demonstrate progress.",
            "N.A.S.A. launched a probe in 2024, and the U.S.A. cheered.",
            "A multicore machine can overload the subsystem.",
            "running computed ponies, really.",
            "\"quotes\", commas, and; semicolons: everywhere",
        ];
        for sentence in samples {
            let before = crate::tokenizer::count_tokens(sentence, vocab);
            for id in HeuristicId::ALL {
                let (out, saved) = engine.apply(id, sentence, vocab);
                let after = crate::tokenizer::count_tokens(&out, vocab);
                assert!(after <= before, "{id} grew {sentence:?} -> {out:?}");
                assert_eq!(before - after, saved);
            }
        }
    }

    #[test]
    fn heuristic_codes_round_trip() {
        for id in HeuristicId::ALL {
            assert_eq!(HeuristicId::parse(id.code()).unwrap(), id);
        }
        assert!(HeuristicId::parse("XX").is_err());
    }
}
