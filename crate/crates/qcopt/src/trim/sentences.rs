//! Rule-based sentence splitting that preserves the original text exactly:
//! concatenating every sentence with its trailing gap reproduces the input
//! byte for byte.

/// One sentence plus the whitespace that followed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub sentence: String,
    pub gap: String,
}

const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "etc", "vs", "cf", "al", "approx", "dr", "mr", "mrs", "ms", "prof", "fig",
    "no", "st", "jr", "sr", "dept", "inc", "est",
];

fn word_before(text: &str, end: usize) -> &str {
    let bytes = text.as_bytes();
    let mut start = end;
    while start > 0 {
        let c = bytes[start - 1];
        if c.is_ascii_alphabetic() || c == b'.' {
            start -= 1;
        } else {
            break;
        }
    }
    &text[start..end]
}

fn is_abbreviation(token: &str) -> bool {
    let trimmed = token.trim_end_matches('.').to_ascii_lowercase();
    if ABBREVIATIONS.contains(&trimmed.as_str()) {
        return true;
    }
    // Single letters and dotted acronyms ("U.S.A"): not sentence ends.
    let letters: Vec<&str> = trimmed.split('.').collect();
    letters.iter().all(|part| part.chars().count() == 1 && !part.is_empty())
}

/// Split on terminal punctuation followed by whitespace and an upholding
/// context (capital, digit, or opening quote), guarding common
/// abbreviations and dotted acronyms. Blank lines always split.
pub fn split_segments(text: &str) -> Vec<Segment> {
    let mut segments = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut sentence_start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let mut boundary = None;
        if matches!(c, '.' | '!' | '?') {
            // Include any closing quotes or brackets after the terminal.
            let mut j = i + 1;
            while j < chars.len() && matches!(chars[j].1, '"' | '\'' | ')' | ']' | '\u{201d}') {
                j += 1;
            }
            let gap_start = j;
            let mut k = gap_start;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let has_gap = k > gap_start;
            let next_ok = k >= chars.len()
                || chars[k].1.is_uppercase()
                || chars[k].1.is_numeric()
                || matches!(chars[k].1, '"' | '\'' | '(' | '\u{201c}');
            let guarded = c == '.' && is_abbreviation(word_before(text, pos));
            let double_newline = chars[gap_start..k]
                .iter()
                .filter(|(_, g)| *g == '\n')
                .count()
                >= 2;
            if (has_gap || k >= chars.len()) && next_ok && (!guarded || double_newline) {
                boundary = Some((gap_start, k));
            }
        }
        if let Some((gap_start, gap_end)) = boundary {
            let sent_end = chars
                .get(gap_start)
                .map(|&(p, _)| p)
                .unwrap_or(text.len());
            let gap_end_pos = chars.get(gap_end).map(|&(p, _)| p).unwrap_or(text.len());
            segments.push(Segment {
                sentence: text[sentence_start..sent_end].to_string(),
                gap: text[sent_end..gap_end_pos].to_string(),
            });
            sentence_start = gap_end_pos;
            i = gap_end;
        } else {
            i += 1;
        }
    }
    if sentence_start < text.len() {
        segments.push(Segment {
            sentence: text[sentence_start..].to_string(),
            gap: String::new(),
        });
    }
    segments
}

pub fn join_segments(segments: &[Segment]) -> String {
    let mut out = String::new();
    for segment in segments {
        out.push_str(&segment.sentence);
        out.push_str(&segment.gap);
    }
    out
}
