use quadirr::characters::FundamentalDiscriminant;
use quadirr::lvalues::{numerator_of, zeta_d};
use quadirr::search::{hit_probability, SearchParams, Searcher};
use quadirr::Exec;

#[test]
fn reference_triples_divide() {
    let triples = [
        (4156, 2, 100391),
        (697, 2, 106681),
        (205, 2, 113173),
        (184, 2, 164999),
        (40, 3, 1264807),
        (380, 2, 1017299),
        (317, 2, 2027569),
    ];
    for (d, m, p) in triples {
        let num = numerator_of(&zeta_d(FundamentalDiscriminant::new(d).unwrap(), m).unwrap().value);
        assert_eq!(&num % p as u32, 0u32.into(), "({d},{m},{p})");
    }
}

#[test]
fn hit_rate_is_near_the_heuristic() {
    // m = 2, D in [5, 2000), window [1e4, 2e4]
    let params = SearchParams::new(10_000, 2.0, 2, 5, 1_999).with_m_max(2);
    let s = Searcher::new(params, Exec::default()).unwrap();
    let cells = s.discriminants().len();
    let batch = s.run_batch(s.start(), cells).unwrap();
    assert_eq!(batch.cells, cells);
    let observed = batch.hits.len() as f64 / cells as f64;
    let predicted = hit_probability(10_000, 2.0).unwrap();
    assert!(
        observed > predicted / 3.0 && observed < predicted * 3.0,
        "observed {observed}, predicted {predicted}"
    );
}
