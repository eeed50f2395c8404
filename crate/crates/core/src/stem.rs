//! The original Porter suffix-stripping stemmer.
//!
//! Words of one or two letters are returned unchanged, as are words that are
//! not plain lowercase ASCII.

/// Stem a single lowercase word.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = Word(word.as_bytes().to_vec());
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5a();
    w.step5b();
    // only ASCII bytes were ever written
    String::from_utf8(w.0).expect("ascii")
}

struct Word(Vec<u8>);

type Cond = fn(&[u8]) -> bool;

/// Consonant flag per letter; `y` is a consonant unless it follows one.
fn consonants(w: &[u8]) -> impl Iterator<Item = bool> + '_ {
    w.iter().scan(false, |prev, &b| {
        let c = match b {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => !*prev,
            _ => true,
        };
        *prev = c;
        Some(c)
    })
}

fn is_consonant(w: &[u8], i: usize) -> bool {
    // a run of y's alternates, so only the letter before the run matters
    let run = w[..=i].iter().rev().take_while(|&&b| b == b'y').count();
    if run == 0 {
        return !matches!(w[i], b'a' | b'e' | b'i' | b'o' | b'u');
    }
    let before = i + 1 - run;
    let first_is_consonant = before == 0 || !is_consonant(w, before - 1);
    first_is_consonant == (run % 2 == 1)
}

/// Number of VC sequences in `[C](VC){m}[V]`.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for c in consonants(w) {
        if c && prev_vowel {
            m += 1;
        }
        prev_vowel = !c;
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    consonants(w).any(|c| !c)
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

/// `*o`: ends consonant-vowel-consonant, the last not w, x or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn m_gt_0(stem: &[u8]) -> bool {
    measure(stem) > 0
}

fn m_gt_1(stem: &[u8]) -> bool {
    measure(stem) > 1
}

impl Word {
    fn ends_with(&self, suffix: &str) -> bool {
        self.0.ends_with(suffix.as_bytes())
    }

    fn stem_len(&self, suffix: &str) -> usize {
        self.0.len() - suffix.len()
    }

    fn replace(&mut self, suffix: &str, replacement: &str) {
        let n = self.stem_len(suffix);
        self.0.truncate(n);
        self.0.extend_from_slice(replacement.as_bytes());
    }

    /// Apply the rule whose suffix matches first; later rules are not tried
    /// even if its condition fails.
    fn apply(&mut self, rules: &[(&str, &str, Cond)]) {
        for &(suffix, replacement, cond) in rules {
            if self.ends_with(suffix) {
                if cond(&self.0[..self.stem_len(suffix)]) {
                    self.replace(suffix, replacement);
                }
                return;
            }
        }
    }

    fn step1a(&mut self) {
        if self.ends_with("sses") {
            self.replace("sses", "ss");
        } else if self.ends_with("ies") {
            self.replace("ies", "i");
        } else if self.ends_with("ss") {
        } else if self.ends_with("s") {
            self.replace("s", "");
        }
    }

    fn step1b(&mut self) {
        if self.ends_with("eed") {
            if m_gt_0(&self.0[..self.stem_len("eed")]) {
                self.replace("eed", "ee");
            }
            return;
        }
        let stripped = ["ed", "ing"]
            .into_iter()
            .find(|s| self.ends_with(s) && has_vowel(&self.0[..self.stem_len(s)]));
        let Some(suffix) = stripped else { return };
        self.replace(suffix, "");

        if self.ends_with("at") {
            self.replace("at", "ate");
        } else if self.ends_with("bl") {
            self.replace("bl", "ble");
        } else if self.ends_with("iz") {
            self.replace("iz", "ize");
        } else if ends_double_consonant(&self.0) {
            if !matches!(self.0.last(), Some(b'l' | b's' | b'z')) {
                self.0.pop();
            }
        } else if measure(&self.0) == 1 && ends_cvc(&self.0) {
            self.0.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if self.ends_with("y") && has_vowel(&self.0[..self.stem_len("y")]) {
            self.replace("y", "i");
        }
    }

    fn step2(&mut self) {
        self.apply(&[
            ("ational", "ate", m_gt_0),
            ("tional", "tion", m_gt_0),
            ("enci", "ence", m_gt_0),
            ("anci", "ance", m_gt_0),
            ("izer", "ize", m_gt_0),
            ("abli", "able", m_gt_0),
            ("alli", "al", m_gt_0),
            ("entli", "ent", m_gt_0),
            ("eli", "e", m_gt_0),
            ("ousli", "ous", m_gt_0),
            ("ization", "ize", m_gt_0),
            ("ation", "ate", m_gt_0),
            ("ator", "ate", m_gt_0),
            ("alism", "al", m_gt_0),
            ("iveness", "ive", m_gt_0),
            ("fulness", "ful", m_gt_0),
            ("ousness", "ous", m_gt_0),
            ("aliti", "al", m_gt_0),
            ("iviti", "ive", m_gt_0),
            ("biliti", "ble", m_gt_0),
        ]);
    }

    fn step3(&mut self) {
        self.apply(&[
            ("icate", "ic", m_gt_0),
            ("ative", "", m_gt_0),
            ("alize", "al", m_gt_0),
            ("iciti", "ic", m_gt_0),
            ("ical", "ic", m_gt_0),
            ("ful", "", m_gt_0),
            ("ness", "", m_gt_0),
        ]);
    }

    fn step4(&mut self) {
        fn ion_cond(stem: &[u8]) -> bool {
            m_gt_1(stem) && matches!(stem.last(), Some(b's' | b't'))
        }
        self.apply(&[
            ("al", "", m_gt_1),
            ("ance", "", m_gt_1),
            ("ence", "", m_gt_1),
            ("er", "", m_gt_1),
            ("ic", "", m_gt_1),
            ("able", "", m_gt_1),
            ("ible", "", m_gt_1),
            ("ant", "", m_gt_1),
            ("ement", "", m_gt_1),
            ("ment", "", m_gt_1),
            ("ent", "", m_gt_1),
            ("ion", "", ion_cond),
            ("ou", "", m_gt_1),
            ("ism", "", m_gt_1),
            ("ate", "", m_gt_1),
            ("iti", "", m_gt_1),
            ("ous", "", m_gt_1),
            ("ive", "", m_gt_1),
            ("ize", "", m_gt_1),
        ]);
    }

    fn step5a(&mut self) {
        if self.ends_with("e") {
            let stem = &self.0[..self.stem_len("e")];
            let m = measure(stem);
            if m > 1 || (m == 1 && !ends_cvc(stem)) {
                self.0.pop();
            }
        }
    }

    fn step5b(&mut self) {
        if measure(&self.0) > 1 && ends_double_consonant(&self.0) && self.ends_with("l") {
            self.0.pop();
        }
    }
}
