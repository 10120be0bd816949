//! Raw text to sentences of tokens.
//!
//! Every `.`, `!` and `?` ends a sentence; runs of terminators collapse into
//! one boundary and segments without a single alphanumeric character are
//! dropped. Abbreviations are not special-cased. A trailing segment with no
//! terminator still counts as a sentence.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords-en.txt");
const BUNDLED_LEMMAS: &str = include_str!("../data/lemmas-en.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Token text as it appears, edge punctuation stripped.
    pub surface: String,
    /// Lowercased surface.
    pub normalized: String,
    /// Dictionary form of `normalized`, or `normalized` itself.
    pub lemma: String,
    pub stopword: bool,
}

impl Token {
    pub fn new(surface: &str) -> Token {
        let normalized = surface.to_lowercase();
        Token {
            surface: surface.to_owned(),
            lemma: normalized.clone(),
            normalized,
            stopword: false,
        }
    }

    pub fn surface_chars(&self) -> usize {
        self.surface.chars().count()
    }

    pub fn lemma_chars(&self) -> usize {
        self.lemma.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub sentence_count: usize,
}

/// Characters that end a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationRules {
    pub terminators: Vec<char>,
}

impl Default for SegmentationRules {
    fn default() -> Self {
        SegmentationRules {
            terminators: vec!['.', '!', '?'],
        }
    }
}

impl SegmentationRules {
    fn is_terminator(&self, c: char) -> bool {
        self.terminators.contains(&c)
    }
}

/// Split `text` at every terminator, keeping segments that contain at least
/// one alphanumeric character. Segments are whitespace-trimmed.
pub fn segment_sentences(text: &str, rules: &SegmentationRules) -> Vec<String> {
    text.split(|c| rules.is_terminator(c))
        .filter(|seg| seg.chars().any(char::is_alphanumeric))
        .map(|seg| seg.trim().to_owned())
        .collect()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-')
}

/// Split a raw sentence into tokens.
///
/// A token is a run of alphanumeric characters, optionally joined by single
/// internal apostrophes or hyphens (`it's`, `half-done`). Everything else,
/// including whitespace, dashes (`--`, `—`) and quotes, separates tokens.
pub fn tokenize(raw_sentence: &str) -> Vec<Token> {
    let chars: Vec<char> = raw_sentence.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            current.push(c);
            continue;
        }
        let joins = is_joiner(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if joins {
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(Token::new(&current));
            current.clear();
        }
    }
    if !current.is_empty() {
        tokens.push(Token::new(&current));
    }
    tokens
}

/// Lowercase function words dropped by the non-stop measures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn from_words<I, S>(words: I) -> StopwordList
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        StopwordList { words }
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> StopwordList {
        StopwordList::from_words(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_file(path: &Path) -> Result<StopwordList> {
        Ok(StopwordList::parse(&read_utf8(path)?))
    }

    pub fn bundled() -> StopwordList {
        StopwordList::parse(BUNDLED_STOPWORDS)
    }

    pub fn contains(&self, normalized: &str) -> bool {
        self.words.contains(normalized)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Lowercase surface form to lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaLexicon {
    map: HashMap<String, String>,
}

impl LemmaLexicon {
    pub fn from_pairs<I, A, B>(pairs: I) -> LemmaLexicon
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut map = HashMap::new();
        for (surface, lemma) in pairs {
            let surface = surface.as_ref().trim().to_lowercase();
            let lemma = lemma.as_ref().trim().to_lowercase();
            if !surface.is_empty() && !lemma.is_empty() {
                map.entry(surface).or_insert(lemma);
            }
        }
        LemmaLexicon { map }
    }

    /// `surface<TAB>lemma` per line. `origin` only labels error messages.
    pub fn parse(text: &str, origin: &Path) -> Result<LemmaLexicon> {
        let mut pairs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: &str| Error::Lexicon {
                path: origin.to_path_buf(),
                line: n + 1,
                message: message.to_owned(),
            };
            let (surface, lemma) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected `surface<TAB>lemma`"))?;
            if surface.trim().is_empty() || lemma.trim().is_empty() {
                return Err(bad("empty surface or lemma"));
            }
            pairs.push((surface, lemma));
        }
        Ok(LemmaLexicon::from_pairs(pairs))
    }

    pub fn from_file(path: &Path) -> Result<LemmaLexicon> {
        LemmaLexicon::parse(&read_utf8(path)?, path)
    }

    pub fn bundled() -> LemmaLexicon {
        LemmaLexicon::parse(BUNDLED_LEMMAS, Path::new("<bundled lemmas-en.tsv>"))
            .expect("bundled lexicon is well-formed")
    }

    pub fn get(&self, normalized: &str) -> Option<&str> {
        self.map.get(normalized).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Stopwords and lemmas shared read-only across book loads.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub stops: Arc<StopwordList>,
    pub lemmas: Arc<LemmaLexicon>,
}

impl Lexicons {
    pub fn new(stops: StopwordList, lemmas: LemmaLexicon) -> Lexicons {
        Lexicons {
            stops: Arc::new(stops),
            lemmas: Arc::new(lemmas),
        }
    }

    pub fn bundled() -> Lexicons {
        static BUNDLED: OnceLock<Lexicons> = OnceLock::new();
        BUNDLED
            .get_or_init(|| Lexicons::new(StopwordList::bundled(), LemmaLexicon::bundled()))
            .clone()
    }

    /// Bundled resources, each replaced by a file when one is given.
    pub fn load(stopwords: Option<&Path>, lemmas: Option<&Path>) -> Result<Lexicons> {
        let bundled = Lexicons::bundled();
        let stops = match stopwords {
            Some(p) => Arc::new(StopwordList::from_file(p)?),
            None => bundled.stops,
        };
        let lemmas = match lemmas {
            Some(p) => Arc::new(LemmaLexicon::from_file(p)?),
            None => bundled.lemmas,
        };
        Ok(Lexicons { stops, lemmas })
    }
}

pub fn remove_stopwords(sentence: &Sentence, stops: &StopwordList) -> Sentence {
    Sentence {
        index: sentence.index,
        tokens: sentence
            .tokens
            .iter()
            .filter(|t| !stops.contains(&t.normalized))
            .cloned()
            .collect(),
    }
}

pub fn lemmatize(sentence: &Sentence, lexicon: &LemmaLexicon) -> Sentence {
    Sentence {
        index: sentence.index,
        tokens: sentence
            .tokens
            .iter()
            .map(|t| Token {
                lemma: lexicon.get(&t.normalized).unwrap_or(&t.normalized).to_owned(),
                ..t.clone()
            })
            .collect(),
    }
}

/// Full pipeline over in-memory text: segment, tokenize, lemmatize and flag
/// stopwords. Sentences that end up with no tokens are dropped.
pub fn document_from_text(
    id: &str,
    text: &str,
    stops: &StopwordList,
    lexicon: &LemmaLexicon,
) -> Document {
    let rules = SegmentationRules::default();
    let mut sentences = Vec::new();
    for raw in segment_sentences(text, &rules) {
        let tokens = tokenize(&raw);
        if tokens.is_empty() {
            continue;
        }
        let mut sentence = lemmatize(
            &Sentence {
                index: sentences.len(),
                tokens,
            },
            lexicon,
        );
        for t in &mut sentence.tokens {
            t.stopword = stops.contains(&t.normalized);
        }
        sentences.push(sentence);
    }
    Document {
        id: id.to_owned(),
        sentence_count: sentences.len(),
        sentences,
    }
}

/// Read and pipeline one book. The document id is the file stem.
pub fn load_document(path: &Path, stops: &StopwordList, lexicon: &LemmaLexicon) -> Result<Document> {
    let text = read_utf8(path)?;
    Ok(document_from_text(&book_id(path), &text, stops, lexicon))
}

pub(crate) fn book_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn read_utf8(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::Ingest {
        path: PathBuf::from(path),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Encoding {
        path: PathBuf::from(path),
        offset: e.utf8_error().valid_up_to(),
    })?;
    Ok(match text.strip_prefix('\u{feff}') {
        Some(rest) => rest.to_owned(),
        None => text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn segments_excerpt_into_two() {
        let text = "To Sherlock Holmes she is always the woman. I have seldom heard him mention her under any other name.";
        assert_eq!(segment_sentences(text, &SegmentationRules::default()).len(), 2);
    }

    #[test]
    fn empty_text_has_no_sentences() {
        assert!(segment_sentences("", &SegmentationRules::default()).is_empty());
    }

    #[test]
    fn terminator_runs_collapse() {
        let segs = segment_sentences("Wait...! Go.", &SegmentationRules::default());
        assert_eq!(segs, vec!["Wait", "Go"]);
    }

    #[test]
    fn abbreviations_split() {
        let segs = segment_sentences("Mr. Holmes sat.", &SegmentationRules::default());
        assert_eq!(segs, vec!["Mr", "Holmes sat"]);
    }

    #[test]
    fn punctuation_only_segments_dropped() {
        let segs = segment_sentences("\" . -- ! Yes? ' .", &SegmentationRules::default());
        assert_eq!(segs, vec!["Yes"]);
    }

    #[test]
    fn tokenizes_words() {
        let t = tokenize("To Sherlock Holmes she is always the woman");
        assert_eq!(t.len(), 8);
        assert_eq!(t[1].normalized, "sherlock");
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn keeps_internal_apostrophes_and_hyphens() {
        let t = tokenize("it's half-done (really)");
        assert_eq!(surfaces(&t), vec!["it's", "half-done", "really"]);
    }

    #[test]
    fn dashes_and_edge_quotes_separate() {
        let t = tokenize("'Antichrist--I really—believe' dogs' -x");
        assert_eq!(surfaces(&t), vec!["Antichrist", "I", "really", "believe", "dogs", "x"]);
    }

    #[test]
    fn stopword_removal() {
        let stops = StopwordList::from_words(["to", "she", "is", "the"]);
        let s = Sentence {
            index: 0,
            tokens: tokenize("To Sherlock Holmes she is always the woman"),
        };
        let kept = remove_stopwords(&s, &stops);
        let words: Vec<_> = kept.tokens.iter().map(|t| t.normalized.as_str()).collect();
        assert_eq!(words, vec!["sherlock", "holmes", "always", "woman"]);

        let only = Sentence {
            index: 3,
            tokens: tokenize("to the"),
        };
        let removed = remove_stopwords(&only, &stops);
        assert!(removed.is_empty());
        assert_eq!(removed.index, 3);
    }

    #[test]
    fn lemmatizes_with_identity_fallback() {
        let lex = LemmaLexicon::from_pairs([("is", "be"), ("eclipses", "eclipse"), ("predominates", "predominate")]);
        let s = Sentence {
            index: 0,
            tokens: tokenize("she is always the woman"),
        };
        let lemmas: Vec<_> = lemmatize(&s, &lex).tokens.into_iter().map(|t| t.lemma).collect();
        assert_eq!(lemmas, vec!["she", "be", "always", "the", "woman"]);

        let s = Sentence {
            index: 0,
            tokens: tokenize("Eclipses and predominates"),
        };
        let lemmas: Vec<_> = lemmatize(&s, &lex).tokens.into_iter().map(|t| t.lemma).collect();
        assert_eq!(lemmas, vec!["eclipse", "and", "predominate"]);
    }

    #[test]
    fn lexicon_parse_errors_carry_line() {
        let err = LemmaLexicon::parse("a\tb\nbroken\n", Path::new("lex.tsv")).unwrap_err();
        match err {
            Error::Lexicon { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lexicon_entries_lowercased() {
        let lex = LemmaLexicon::parse("# comment\nHeard\tHEAR\n\n", Path::new("x")).unwrap();
        assert_eq!(lex.get("heard"), Some("hear"));
        let stops = StopwordList::parse("The\nthe\n# x\n");
        assert_eq!(stops.len(), 1);
        assert!(stops.contains("the"));
    }

    #[test]
    fn bundled_resources_cover_examples() {
        let lex = Lexicons::bundled();
        assert_eq!(lex.lemmas.get("heard"), Some("hear"));
        assert_eq!(lex.lemmas.get("is"), Some("be"));
        assert!(lex.stops.contains("the"));
        assert!(!lex.stops.contains("always"));
    }

    #[test]
    fn trailing_unterminated_segment_kept() {
        let lex = Lexicons::bundled();
        let doc = document_from_text("x", "hello world", &lex.stops, &lex.lemmas);
        assert_eq!(doc.sentence_count, 1);
        assert_eq!(doc.sentences[0].len(), 2);
    }

    #[test]
    fn load_missing_file_is_ingest_error() {
        let lex = Lexicons::bundled();
        let err = load_document(Path::new("/nonexistent/book.txt"), &lex.stops, &lex.lemmas).unwrap_err();
        assert!(matches!(err, Error::Ingest { .. }));
        assert!(err.to_string().contains("/nonexistent/book.txt"));
    }

    #[test]
    fn load_invalid_utf8_is_encoding_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        fs::write(&path, b"fine text. \xff\xfe broken").unwrap();
        let lex = Lexicons::bundled();
        let err = load_document(&path, &lex.stops, &lex.lemmas).unwrap_err();
        match err {
            Error::Encoding { offset, .. } => assert_eq!(offset, 11),
            other => panic!("unexpected {other:?}"),
        }
    }
}
