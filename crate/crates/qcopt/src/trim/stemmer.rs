//! Self-contained Porter stemmer over ASCII lowercase words.
//!
//! Stems are spelling fragments, not words ("ponies" -> "poni"); the LS
//! heuristic repairs them against a word list before use.

fn is_consonant(word: &[u8], i: usize) -> bool {
    match word[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(word, i - 1),
        _ => true,
    }
}

/// The measure m: number of vowel-consonant transitions in [C](VC)^m[V].
fn measure(word: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..word.len() {
        let cons = is_consonant(word, i);
        if prev_vowel && cons {
            m += 1;
        }
        prev_vowel = !cons;
    }
    m
}

fn contains_vowel(word: &[u8]) -> bool {
    (0..word.len()).any(|i| !is_consonant(word, i))
}

fn ends_double_consonant(word: &[u8]) -> bool {
    let n = word.len();
    n >= 2 && word[n - 1] == word[n - 2] && is_consonant(word, n - 1)
}

/// Ends consonant-vowel-consonant where the final consonant is not w, x, y.
fn ends_cvc(word: &[u8]) -> bool {
    let n = word.len();
    n >= 3
        && is_consonant(word, n - 3)
        && !is_consonant(word, n - 2)
        && is_consonant(word, n - 1)
        && !matches!(word[n - 1], b'w' | b'x' | b'y')
}

fn ends_with(word: &[u8], suffix: &str) -> bool {
    word.len() >= suffix.len() && &word[word.len() - suffix.len()..] == suffix.as_bytes()
}

fn replace(word: &mut Vec<u8>, suffix: &str, with: &str) {
    let keep = word.len() - suffix.len();
    word.truncate(keep);
    word.extend_from_slice(with.as_bytes());
}

/// Try rules in order; apply the first matching suffix whose stem passes
/// the measure test.
fn rule_set(word: &mut Vec<u8>, rules: &[(&str, &str, usize)]) -> bool {
    for &(suffix, with, min_m) in rules {
        if ends_with(word, suffix) {
            let stem_len = word.len() - suffix.len();
            if measure(&word[..stem_len]) > min_m {
                replace(word, suffix, with);
                return true;
            }
            return false;
        }
    }
    false
}

pub fn stem(input: &str) -> String {
    if input.len() <= 2 || !input.bytes().all(|b| b.is_ascii_lowercase()) {
        return input.to_string();
    }
    let mut w: Vec<u8> = input.as_bytes().to_vec();

    // Step 1a.
    if ends_with(&w, "sses") {
        replace(&mut w, "sses", "ss");
    } else if ends_with(&w, "ies") {
        replace(&mut w, "ies", "i");
    } else if ends_with(&w, "ss") {
        // keep
    } else if ends_with(&w, "s") {
        replace(&mut w, "s", "");
    }

    // Step 1b.
    let mut cleanup = false;
    if ends_with(&w, "eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            replace(&mut w, "eed", "ee");
        }
    } else if ends_with(&w, "ed") && contains_vowel(&w[..w.len() - 2]) {
        replace(&mut w, "ed", "");
        cleanup = true;
    } else if ends_with(&w, "ing") && contains_vowel(&w[..w.len() - 3]) {
        replace(&mut w, "ing", "");
        cleanup = true;
    }
    if cleanup {
        if ends_with(&w, "at") || ends_with(&w, "bl") || ends_with(&w, "iz") {
            w.push(b'e');
        } else if ends_double_consonant(&w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
            w.pop();
        } else if measure(&w) == 1 && ends_cvc(&w) {
            w.push(b'e');
        }
    }

    // Step 1c.
    if ends_with(&w, "y") && contains_vowel(&w[..w.len() - 1]) {
        replace(&mut w, "y", "i");
    }

    // Step 2.
    rule_set(
        &mut w,
        &[
            ("ational", "ate", 0),
            ("tional", "tion", 0),
            ("enci", "ence", 0),
            ("anci", "ance", 0),
            ("izer", "ize", 0),
            ("abli", "able", 0),
            ("alli", "al", 0),
            ("entli", "ent", 0),
            ("eli", "e", 0),
            ("ousli", "ous", 0),
            ("ization", "ize", 0),
            ("ation", "ate", 0),
            ("ator", "ate", 0),
            ("alism", "al", 0),
            ("iveness", "ive", 0),
            ("fulness", "ful", 0),
            ("ousness", "ous", 0),
            ("aliti", "al", 0),
            ("iviti", "ive", 0),
            ("biliti", "ble", 0),
        ],
    );

    // Step 3.
    rule_set(
        &mut w,
        &[
            ("icate", "ic", 0),
            ("ative", "", 0),
            ("alize", "al", 0),
            ("iciti", "ic", 0),
            ("ical", "ic", 0),
            ("ful", "", 0),
            ("ness", "", 0),
        ],
    );

    // Step 4.
    let applied = rule_set(
        &mut w,
        &[
            ("ement", "", 1),
            ("ance", "", 1),
            ("ence", "", 1),
            ("able", "", 1),
            ("ible", "", 1),
            ("ment", "", 1),
            ("ent", "", 1),
            ("ant", "", 1),
            ("ism", "", 1),
            ("ate", "", 1),
            ("iti", "", 1),
            ("ous", "", 1),
            ("ive", "", 1),
            ("ize", "", 1),
            ("ou", "", 1),
            ("al", "", 1),
            ("er", "", 1),
            ("ic", "", 1),
        ],
    );
    if !applied && ends_with(&w, "ion") {
        let stem_len = w.len() - 3;
        if measure(&w[..stem_len]) > 1
            && stem_len > 0
            && matches!(w[stem_len - 1], b's' | b't')
        {
            replace(&mut w, "ion", "");
        }
    }

    // Step 5a.
    if ends_with(&w, "e") {
        let m = measure(&w[..w.len() - 1]);
        if m > 1 || (m == 1 && !ends_cvc(&w[..w.len() - 1])) {
            w.pop();
        }
    }
    // Step 5b.
    if measure(&w) > 1 && ends_double_consonant(&w) && w[w.len() - 1] == b'l' {
        w.pop();
    }

    String::from_utf8(w).expect("ascii in, ascii out")
}

#[cfg(test)]
mod tests {
    use super::stem;

    #[test]
    fn canonical_pairs() {
        let cases = [
            ("caresses", "caress"),
            ("ponies", "poni"),
            ("ties", "ti"),
            ("caress", "caress"),
            ("cats", "cat"),
            ("feed", "feed"),
            ("agreed", "agre"),
            ("plastered", "plaster"),
            ("bled", "bled"),
            ("motoring", "motor"),
            ("sing", "sing"),
            ("conflated", "conflat"),
            ("troubled", "troubl"),
            ("sized", "size"),
            ("hopping", "hop"),
            ("tanned", "tan"),
            ("falling", "fall"),
            ("hissing", "hiss"),
            ("fizzed", "fizz"),
            ("failing", "fail"),
            ("filing", "file"),
            ("happy", "happi"),
            ("sky", "sky"),
            ("relational", "relat"),
            ("conditional", "condit"),
            ("rational", "ration"),
            ("digitizer", "digit"),
            ("operator", "oper"),
            ("feudalism", "feudal"),
            ("decisiveness", "decis"),
            ("hopefulness", "hope"),
            ("formaliti", "formal"),
            ("formative", "form"),
            ("formalize", "formal"),
            ("electrical", "electr"),
            ("hopeful", "hope"),
            ("goodness", "good"),
            ("revival", "reviv"),
            ("allowance", "allow"),
            ("inference", "infer"),
            ("airliner", "airlin"),
            ("adjustable", "adjust"),
            ("defensible", "defens"),
            ("irritant", "irrit"),
            ("replacement", "replac"),
            ("adjustment", "adjust"),
            ("dependent", "depend"),
            ("adoption", "adopt"),
            ("activate", "activ"),
            ("angulariti", "angular"),
            ("homologous", "homolog"),
            ("effective", "effect"),
            ("bowdlerize", "bowdler"),
            ("probate", "probat"),
            ("rate", "rate"),
            ("cease", "ceas"),
            ("controll", "control"),
            ("roll", "roll"),
            ("running", "run"),
            ("computed", "comput"),
        ];
        for (input, expected) in cases {
            assert_eq!(stem(input), expected, "stem({input:?})");
        }
    }

    #[test]
    fn short_and_non_ascii_words_pass_through() {
        assert_eq!(stem("at"), "at");
        assert_eq!(stem("Go"), "Go");
        assert_eq!(stem("café"), "café");
    }
}
