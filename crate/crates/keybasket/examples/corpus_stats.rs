//! Distribution summaries and the two text-level indices: boxplot five-number
//! summaries, the h-point, thematic concentration, and the rank-sum test.

use keybasket::corpus::build_profile;
use keybasket::stats::{boxplot_summary, h_point, thematic_concentration, wilcoxon_rank_sum};

fn main() -> keybasket::Result<()> {
    // lift values from two rule sets
    let press = [9.1, 7.4, 6.2, 5.9, 5.5, 4.8, 4.1, 3.9, 3.2, 2.5, 41.0];
    let forums = [3.1, 2.9, 2.7, 2.2, 2.0, 1.8, 1.6, 1.5, 1.4, 1.2];

    let summary = boxplot_summary(&press)?;
    println!(
        "press lift: min {:.2} q1 {:.2} median {:.2} q3 {:.2} max {:.2}",
        summary.min, summary.q1, summary.median, summary.q3, summary.max
    );
    println!(
        "  upper fence {:.2}, {} outlier(s) above it",
        summary.upper_fence, summary.n_outliers_high
    );

    // the h-point: where rank and frequency cross in the ranked profile
    let freqs = [120u64, 70, 42, 20, 11, 7, 5, 4, 3, 3, 2, 2, 1, 1, 1];
    println!("\nh-point of the ranked frequencies: {:.2}", h_point(&freqs)?);

    // content words above the h-point carry the thematic concentration
    let doc = [
        "the", "the", "the", "the", "the", "the", "the", "the", "of", "of", "of", "of", "of",
        "sea", "sea", "sea", "sea", "migrant", "migrant", "migrant", "and", "and", "boat",
    ];
    let profile = build_profile(&[doc]);
    let function_words = ["the", "of", "and"];
    let tc = thematic_concentration(&profile, |lemma| !function_words.contains(&lemma))?;
    println!(
        "h {:.2}, thematic concentration {:.3}, contributing: {:?}",
        tc.h,
        tc.tc,
        tc.contributing
            .iter()
            .map(|w| w.lemma.as_str())
            .collect::<Vec<_>>()
    );

    // are the two lift distributions plausibly the same?
    let test = wilcoxon_rank_sum(&press, &forums)?;
    println!(
        "\nrank-sum: U = {}, p = {:.5} ({:?}, n = {} vs {})",
        test.u, test.p, test.method, test.n1, test.n2
    );
    assert!(test.p < 0.05, "clearly separated samples");
    Ok(())
}
