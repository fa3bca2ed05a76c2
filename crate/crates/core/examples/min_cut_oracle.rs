//! Minimizes `J` and the perimeter on random planar complexes by min-cut and
//! checks the result against brute-force enumeration. Dyadic weights make
//! the comparison exact.

use weak_imcf::discrete::{
    exhaustive_minimum, minimize, perimeter, submodularity_check, CellComplex, Energy, Extremal, RegionSet,
};

fn main() -> weak_imcf::Result<()> {
    let mut worst_slack = f64::INFINITY;
    for seed in 0..20 {
        let c = CellComplex::random_planar(4, 4, seed)?;
        let n = c.len();
        let k = RegionSet::from_fn(n, |i| i != 5);
        let inner = RegionSet::from_fn(n, |i| i == 5);
        let outer = RegionSet::full(n);
        let cut = minimize(&c, &k, &inner, &outer, Energy::J, Extremal::MinimalVolume)?;
        let big = minimize(&c, &k, &inner, &outer, Energy::J, Extremal::MaximalVolume)?;
        let brute = exhaustive_minimum(&c, &k, &inner, &outer, Energy::J, 0.0)?;
        println!(
            "seed {seed:>2}: min J = {:>10.6} (cut) {:>10.6} (enumerated, {} sets), {} minimizers, volumes {:.3}..{:.3}",
            cut.value,
            brute.value,
            brute.evaluated,
            brute.minimizer_count,
            cut.set.volume(&c),
            big.set.volume(&c)
        );
        assert_eq!(cut.value, brute.value);
        let e = RegionSet::from_fn(n, |i| i % 3 == 0);
        let f = RegionSet::from_fn(n, |i| i < 7);
        worst_slack = worst_slack.min(submodularity_check(&c, &e, &f));
    }
    println!("least submodularity slack {worst_slack}");

    let c = CellComplex::planar(5, 5)?;
    let center = RegionSet::from_fn(25, |i| i == 12);
    println!("unit grid: perimeter of the centre cell {}", perimeter(&c, &center));
    println!("{}", &c.to_json()?[..80]);
    Ok(())
}
