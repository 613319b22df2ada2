//! Parse the two corpus formats and inspect a frequency profile.

use keybasket::corpus::{build_profile, parse_jsonl, parse_vertical, write_jsonl};

const VERTICAL: &str = "\
<doc id=\"news-001\" segment=\"press\">
Migrants\tmigrant\tNN2
crossed\tcross\tVVD
the\tthe\tAT0
sea\tsea\tNN1
.\t.\tPUN
</doc>
<doc id=\"news-002\" segment=\"press\">
The\tthe\tAT0
boat\tboat\tNN1
reached\treach\tVVD
the\tthe\tAT0
port\tport\tNN1
</doc>
";

fn main() -> keybasket::Result<()> {
    let corpus = parse_vertical(VERTICAL.as_bytes())?;
    println!("parsed {} documents from vertical input", corpus.len());
    for doc in corpus.documents() {
        println!(
            "  {} ({}): {} tokens, first lemma {:?}",
            doc.id,
            doc.segment,
            doc.token_count(),
            doc.lemmas[0]
        );
    }

    // the line-JSON form is the normalized on-disk representation
    let mut jsonl = Vec::new();
    write_jsonl(&corpus, &mut jsonl)?;
    println!("\nnormalized to JSONL:");
    print!("{}", String::from_utf8_lossy(&jsonl));

    let reparsed = parse_jsonl(jsonl.as_slice())?;
    assert_eq!(reparsed.len(), corpus.len());

    // frequency profiles drive both keyness scoring and the h-point
    let profile = corpus.frequency_profile();
    println!("\n{} tokens, ranked:", profile.total_tokens());
    for (rank, (lemma, count)) in profile.ranked().iter().enumerate() {
        println!("  {:>2}. {lemma:<8} {count}", rank + 1);
    }

    // profiles can also come straight from lemma sequences
    let tiny = build_profile(&[["sea", "sea", "port"]]);
    println!("\ninline profile: sea x{}", tiny.count("sea"));
    Ok(())
}
