//! The six per-sentence length series of a document.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::text::{Document, Sentence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    /// N_w: tokens per sentence.
    Words,
    /// N_c: surface characters per sentence.
    Chars,
    /// N_l: lemma characters per sentence.
    LemmaChars,
    /// N_Sw: non-stopword tokens.
    NonStopWords,
    /// N_Sc: surface characters of non-stopword tokens.
    NonStopChars,
    /// N_Sl: lemma characters of non-stopword tokens.
    NonStopLemmaChars,
}

impl MeasureKind {
    /// Canonical order; pair enumeration follows it.
    pub const ALL: [MeasureKind; 6] = [
        MeasureKind::Words,
        MeasureKind::Chars,
        MeasureKind::LemmaChars,
        MeasureKind::NonStopWords,
        MeasureKind::NonStopChars,
        MeasureKind::NonStopLemmaChars,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MeasureKind::Words => "N_w",
            MeasureKind::Chars => "N_c",
            MeasureKind::LemmaChars => "N_l",
            MeasureKind::NonStopWords => "N_Sw",
            MeasureKind::NonStopChars => "N_Sc",
            MeasureKind::NonStopLemmaChars => "N_Sl",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Words => "words",
            MeasureKind::Chars => "chars",
            MeasureKind::LemmaChars => "lemma_chars",
            MeasureKind::NonStopWords => "nonstop_words",
            MeasureKind::NonStopChars => "nonstop_chars",
            MeasureKind::NonStopLemmaChars => "nonstop_lemma_chars",
        }
    }

    pub fn counts_characters(self) -> bool {
        !matches!(self, MeasureKind::Words | MeasureKind::NonStopWords)
    }

    pub fn drops_stopwords(self) -> bool {
        self.index() >= 3
    }

    /// The 15 unordered pairs `(a, b)` with `a` before `b` canonically.
    pub fn pairs() -> Vec<(MeasureKind, MeasureKind)> {
        let mut out = Vec::with_capacity(15);
        for (i, &a) in Self::ALL.iter().enumerate() {
            for &b in &Self::ALL[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }

    fn measure(self, sentence: &Sentence) -> u64 {
        let kept = |t: &&Token| !(self.drops_stopwords() && t.stopword);
        let tokens = sentence.tokens.iter().filter(kept);
        let total: usize = match self {
            MeasureKind::Words | MeasureKind::NonStopWords => tokens.count(),
            MeasureKind::Chars | MeasureKind::NonStopChars => tokens.map(Token::surface_chars).sum(),
            MeasureKind::LemmaChars | MeasureKind::NonStopLemmaChars => {
                tokens.map(Token::lemma_chars).sum()
            }
        };
        total as u64
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthSeries {
    pub book_id: String,
    pub kind: MeasureKind,
    pub values: Vec<u64>,
}

impl LengthSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }
}

/// Size of each sentence under `kind`. Stopword status is read from the
/// token flags set by the text pipeline.
pub fn extract_series(doc: &Document, kind: MeasureKind) -> LengthSeries {
    LengthSeries {
        book_id: doc.id.clone(),
        kind,
        values: doc.sentences.iter().map(|s| kind.measure(s)).collect(),
    }
}

/// All six series in canonical order.
pub fn extract_all(doc: &Document) -> Vec<LengthSeries> {
    MeasureKind::ALL
        .iter()
        .map(|&k| extract_series(doc, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{document_from_text, Lexicons};

    fn excerpt() -> Document {
        let lex = Lexicons::bundled();
        document_from_text(
            "t1",
            "To Sherlock Holmes she is always the woman.",
            &lex.stops,
            &lex.lemmas,
        )
    }

    #[test]
    fn first_table_sentence() {
        let doc = excerpt();
        assert_eq!(extract_series(&doc, MeasureKind::Words).values, vec![8]);
        assert_eq!(extract_series(&doc, MeasureKind::NonStopWords).values, vec![4]);
        assert_eq!(extract_series(&doc, MeasureKind::Chars).values, vec![35]);
        // "is" lemmatizes to "be"
        assert_eq!(extract_series(&doc, MeasureKind::LemmaChars).values, vec![35]);
        // sherlock holmes always woman
        assert_eq!(extract_series(&doc, MeasureKind::NonStopChars).values, vec![25]);
    }

    #[test]
    fn empty_document_gives_six_empty_series() {
        let doc = Document {
            id: "e".into(),
            sentences: vec![],
            sentence_count: 0,
        };
        let all = extract_all(&doc);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(LengthSeries::is_empty));
    }

    #[test]
    fn all_stopword_sentence_gives_zero() {
        let lex = Lexicons::bundled();
        let doc = document_from_text("s", "It is. Holmes ran.", &lex.stops, &lex.lemmas);
        let all = extract_all(&doc);
        assert_eq!(all[3].values, vec![0, 2]);
        assert_eq!(all[4].values[0], 0);
        assert!(all.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn fifteen_canonical_pairs() {
        let pairs = MeasureKind::pairs();
        assert_eq!(pairs.len(), 15);
        assert!(pairs.iter().all(|(a, b)| a < b));
        assert_eq!(pairs[0], (MeasureKind::Words, MeasureKind::Chars));
    }
}
