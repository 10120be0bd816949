use std::fs;

use sentlen::{
    document_from_text, extract_all, load_document, Document, LemmaLexicon, Lexicons, MeasureKind,
    StopwordList,
};

const EXCERPT: &str = "To Sherlock Holmes she is always the woman. I have seldom heard him \
mention her under any other name. In his eyes she eclipses and predominates the whole of her \
sex. It was not that he felt any emotion akin to love for Irene Adler.";

fn implied_lemmas() -> LemmaLexicon {
    LemmaLexicon::from_pairs([
        ("is", "be"),
        ("was", "be"),
        ("heard", "hear"),
        ("eyes", "eye"),
        ("eclipses", "eclipse"),
        ("predominates", "predominate"),
    ])
}

fn column(doc: &Document, lemma: bool, drop_stops: bool) -> Vec<String> {
    doc.sentences
        .iter()
        .map(|s| {
            s.tokens
                .iter()
                .filter(|t| !(drop_stops && t.stopword))
                .map(|t| if lemma { t.lemma.as_str() } else { t.normalized.as_str() })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

#[test]
fn excerpt_columns_with_implied_lexicon() {
    let stops = StopwordList::bundled();
    let doc = document_from_text("excerpt", EXCERPT, &stops, &implied_lemmas());
    assert_eq!(doc.sentence_count, 4);
    assert_eq!(
        column(&doc, false, true),
        [
            "sherlock holmes always woman",
            "seldom heard mention name",
            "eyes eclipses predominates whole sex",
            "felt emotion akin love irene adler",
        ]
    );
    assert_eq!(
        column(&doc, true, true),
        [
            "sherlock holmes always woman",
            "seldom hear mention name",
            "eye eclipse predominate whole sex",
            "felt emotion akin love irene adler",
        ]
    );
    assert_eq!(
        column(&doc, true, false),
        [
            "to sherlock holmes she be always the woman",
            "i have seldom hear him mention her under any other name",
            "in his eye she eclipse and predominate the whole of her sex",
            "it be not that he felt any emotion akin to love for irene adler",
        ]
    );
}

#[test]
fn bundled_lexicon_differs_only_on_felt() {
    let lex = Lexicons::bundled();
    let doc = document_from_text("excerpt", EXCERPT, &lex.stops, &lex.lemmas);
    let lemmatized = column(&doc, true, true);
    assert_eq!(lemmatized[1], "seldom hear mention name");
    assert_eq!(lemmatized[2], "eye eclipse predominate whole sex");
    assert_eq!(lemmatized[3], "feel emotion akin love irene adler");
}

#[test]
fn excerpt_series() {
    let stops = StopwordList::bundled();
    let doc = document_from_text("excerpt", EXCERPT, &stops, &implied_lemmas());
    let all = extract_all(&doc);
    assert!(all.iter().all(|s| s.len() == 4 && s.book_id == "excerpt"));
    assert_eq!(all[MeasureKind::Words.index()].values, vec![8, 11, 12, 14]);
    assert_eq!(all[MeasureKind::NonStopWords.index()].values, vec![4, 4, 5, 6]);
    assert_eq!(all[MeasureKind::Chars.index()].values[0], 35);
    // sherlock holmes always woman / seldom hear mention name
    assert_eq!(all[MeasureKind::NonStopLemmaChars.index()].values[..2], [25, 21]);
}

#[test]
fn files_load_through_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let lex = Lexicons::bundled();

    let excerpt = dir.path().join("holmes_excerpt.txt");
    fs::write(&excerpt, format!("\u{feff}{EXCERPT}\n")).unwrap();
    let doc = load_document(&excerpt, &lex.stops, &lex.lemmas).unwrap();
    assert_eq!(doc.id, "holmes_excerpt");
    assert_eq!(doc.sentence_count, 4);
    assert_eq!(doc.sentences[0].tokens[0].surface, "To");

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(load_document(&empty, &lex.stops, &lex.lemmas).unwrap().sentence_count, 0);

    let bare = dir.path().join("bare.txt");
    fs::write(&bare, "hello world").unwrap();
    let doc = load_document(&bare, &lex.stops, &lex.lemmas).unwrap();
    assert_eq!(doc.sentence_count, 1);
    assert_eq!(doc.sentences[0].len(), 2);
}

#[test]
fn lexicon_files_override_bundled() {
    let dir = tempfile::tempdir().unwrap();
    let stops = dir.path().join("stops.txt");
    let lemmas = dir.path().join("lemmas.tsv");
    fs::write(&stops, "holmes\n").unwrap();
    fs::write(&lemmas, "sherlock\tsh\n").unwrap();
    let lex = Lexicons::load(Some(&stops), Some(&lemmas)).unwrap();
    let doc = document_from_text("x", "Sherlock Holmes ran.", &lex.stops, &lex.lemmas);
    let all = extract_all(&doc);
    assert_eq!(all[MeasureKind::NonStopWords.index()].values, vec![2]);
    assert_eq!(all[MeasureKind::NonStopLemmaChars.index()].values, vec![5]);

    fs::write(&lemmas, "broken line without tab\n").unwrap();
    let err = Lexicons::load(None, Some(&lemmas)).unwrap_err();
    assert!(err.to_string().contains("lemmas.tsv:1"), "{err}");
}
