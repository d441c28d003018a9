//! Every corpus entry loads and every recorded digest reproduces.

use cohomolab::cli::{golden_digest, golden_keys};
use cohomolab::corpus::Corpus;

#[test]
fn corpus_validates() {
    Corpus::embedded().validate().unwrap();
}

#[test]
fn golden_digests_reproduce() {
    let corpus = Corpus::embedded();
    let mut checked = 0;
    for entry in corpus.entries() {
        let keys = golden_keys(&corpus, &entry.name).unwrap();
        let mut recorded: Vec<&String> = entry.golden.keys().collect();
        recorded.sort();
        let mut expected: Vec<&String> = keys.iter().collect();
        expected.sort();
        assert_eq!(recorded, expected, "{}", entry.name);
        for (key, digest) in &entry.golden {
            assert_eq!(&golden_digest(&corpus, key).unwrap(), digest, "{key}");
            checked += 1;
        }
    }
    assert_eq!(checked, 64);
}
