//! Byline cleaning and contributor profiles on a handful of hand-written records.
//!
//! cargo run --example clean_bylines

use copub::ingest::{clean_bylines, contributor_stats, restrict_multi_outlet, ArticleRecord, ArticleSet, BylineRules};

fn main() -> copub::Result<()> {
    let date = |s: &str| chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d").expect("date");
    let raw = ArticleSet::new(vec![
        ArticleRecord::new("1", "daily", "By Maria Lopez").with_date(date("2019-03-01")),
        ArticleRecord::new("2", "weekly", "MARIA LOPEZ").with_date(date("2019-06-12")),
        ArticleRecord::new("3", "weekly", "Staff Reporter"),
        ArticleRecord::new("4", "daily", "The Daily"),
        ArticleRecord::new("5", "daily", "Sam Ng and Maria Lopez"),
        ArticleRecord::new("6", "review", "Dr. Sam Ng").with_date(date("2020-01-20")),
        ArticleRecord::new("7", "daily", "sam ng"),
    ])?;
    let rules = BylineRules::new(vec!["staff reporter".into()], vec!["the daily".into()]);
    for r in raw.iter() {
        println!("{:<24} -> {:?}", r.byline_raw, rules.contributor_id(&r.byline_raw));
    }

    let clean = clean_bylines(&raw, &rules);
    let multi = restrict_multi_outlet(&clean, 2)?;
    println!("\n{} of {} articles kept; multi-outlet writers:", multi.len(), raw.len());
    for p in contributor_stats(&multi) {
        println!(
            "  {:<12} stories {} outlets {} span {:?} days",
            p.contributor_id, p.story_count, p.outlet_count, p.active_span_days
        );
    }
    Ok(())
}
