//! Graph isomorphism through the diagonal of Q_N^l(|x⟩⟨x|).
//!
//! ```text
//! cargo run --release --example graph_isomorphism -- 1-2,2-3,3-4 1-3,3-2,2-4
//! ```

use uniform_channel::gip::{encode_graph, SymmetricAction, Verdict};

fn parse_edges(arg: &str) -> Vec<(usize, usize)> {
    arg.split(',')
        .filter(|s| !s.is_empty())
        .map(|e| {
            let (a, b) = e.split_once('-').expect("edge as a-b");
            let (a, b): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
            (a.min(b), a.max(b))
        })
        .collect()
}

fn main() -> uniform_channel::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (g1, g2) = match args.as_slice() {
        [a, b] => (parse_edges(a), parse_edges(b)),
        _ => (vec![(1, 2), (2, 3), (3, 4)], vec![(1, 3), (2, 3), (2, 4)]),
    };
    let n = g1.iter().chain(&g2).map(|&(_, b)| b).max().unwrap_or(2).max(4);
    let action = SymmetricAction::new(n)?;
    let (x1, x2) = (encode_graph(n, &g1)?, encode_graph(n, &g2)?);

    let decision = action.decide_isomorphic(x1, x2, None)?;
    println!("x1 = {x1}, x2 = {x2}, l = {}", decision.l);
    println!("n! * <x2|Q_N^l(x1)|x2> = {:.9}", decision.scaled);
    match decision.verdict {
        Verdict::Isomorphic => println!(
            "isomorphic, |Aut| = {}",
            decision.automorphism_count.unwrap_or_default()
        ),
        Verdict::NonIsomorphic => println!("not isomorphic"),
    }
    println!("orbit size of x1 = {}", action.orbit(x1)?.len());
    println!("brute force agrees: {}", decision.consistent);
    Ok(())
}
