use hcon::formulas::parse_term;
use hcon::search::{find_evaluation, SearchOptions};
use hcon::skolem::{preset, TermSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = preset("EX3")?;
    let terms = ["0", "S(0)", "$0(S(0))"].iter().map(|s| parse_term(s)).collect::<Result<Vec<_>, _>>()?;
    let outcome = find_evaluation(&th, &TermSet::new(terms)?, &SearchOptions::default())?;
    match outcome.witness() {
        Some(e) => println!("witness: {e}"),
        None => println!("no evaluation"),
    }
    Ok(())
}
