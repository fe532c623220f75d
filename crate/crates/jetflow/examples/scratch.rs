//! Temporary exploration harness: end-to-end chains and checks.
use jetflow::hierarchy::{self, tables};
use jetflow::jetcalc::{Family, JetContext};
use jetflow::densities;
use jetflow::ring::parse;

fn main() {
    let t0 = std::time::Instant::now();

    // KdV chain: 3 -> 5 -> 7 -> 9 vs listings.
    {
        let ctx = JetContext::new(Family::Kdv, 3).unwrap();
        let r = hierarchy::recursion_operator(Family::Kdv, 3).unwrap();
        let mut f = hierarchy::seed_flow(Family::Kdv, 3).unwrap();
        for target in [5u32, 7, 9] {
            f = hierarchy::apply_recursion(&r, &f, &ctx).unwrap();
            let listed = tables::listed_flow(Family::Kdv, 3, target).unwrap();
            println!("[{:?}] kdv ut{target}: matches listing? {} (scale {})",
                t0.elapsed(), f.rhs == listed,
                match &f.provenance { hierarchy::Provenance::Generated{scale,..} => scale.to_string(), _ => "?".into() });
            if f.rhs != listed {
                println!("  GENERATED: {}", f.rhs);
                println!("  LISTED:    {}", listed);
            }
        }
        // continue to 11 for commutator material
        let f11 = hierarchy::apply_recursion(&r, &f, &ctx).unwrap();
        println!("[{:?}] kdv ut11 generated (terms: {})", t0.elapsed(), f11.rhs.num_terms());
    }

    // SKK chains per base: 5 -> 11 vs listing; symmetry f11 cross-check.
    for b in [5u32, 4, 3] {
        let ctx = JetContext::new(Family::Skk, b).unwrap();
        let r = hierarchy::recursion_operator(Family::Skk, b).unwrap();
        let s5 = hierarchy::seed_flow(Family::Skk, b).unwrap();
        let f11 = hierarchy::apply_recursion(&r, &s5, &ctx).unwrap();
        let listed = tables::listed_flow(Family::Skk, b, 11).unwrap();
        println!("[{:?}] skk b={b} ut11: R(ut5) matches listing? {}", t0.elapsed(), f11.rhs == listed);
        if f11.rhs != listed {
            println!("  GENERATED: {}", f11.rhs);
        }
        let f11sym = hierarchy::symmetry_flow(&s5, 11, &ctx).unwrap();
        println!("           symmetry ut11 matches listing? {}", f11sym.rhs == listed);
        // second chain: 7 -> 13, commutators 13 vs 5 and 7
        let s7 = hierarchy::second_seed_flow(Family::Skk, b).unwrap().unwrap();
        let f13 = hierarchy::apply_recursion(&r, &s7, &ctx).unwrap();
        let c135 = hierarchy::commutator(&f13, &s5, &ctx).unwrap();
        let c137 = hierarchy::commutator(&f13, &s7, &ctx).unwrap();
        println!("[{:?}] skk b={b}: [ut13,ut5]=0? {} [ut13,ut7]=0? {}",
            t0.elapsed(), c135.is_zero(), c137.is_zero());
    }

    // Potentiation chain.
    {
        let s5 = hierarchy::seed_flow(Family::Skk, 5).unwrap();
        let p4 = hierarchy::potentiate(&s5).unwrap();
        println!("potentiate(b5 seed) == b4 seed? {}",
            p4.rhs == hierarchy::seed_flow(Family::Skk, 4).unwrap().rhs);
        let p3 = hierarchy::potentiate(&p4).unwrap();
        println!("potentiate(b4 seed) == b3 seed? {}",
            p3.rhs == hierarchy::seed_flow(Family::Skk, 3).unwrap().rhs);
        let s7 = hierarchy::second_seed_flow(Family::Skk, 5).unwrap().unwrap();
        let q4 = hierarchy::potentiate(&s7).unwrap();
        println!("potentiate(b5 ut7) == b4 ut7? {}",
            q4.rhs == tables::listed_flow(Family::Skk, 4, 7).unwrap());
        let q3 = hierarchy::potentiate(&q4).unwrap();
        println!("potentiate(b4 ut7) == b3 ut7? {}",
            q3.rhs == tables::listed_flow(Family::Skk, 3, 7).unwrap());
    }

    // KdV corrected rho1 = a^5 u4^2 conserved along all kdv flows.
    {
        let ctx = JetContext::new(Family::Kdv, 3).unwrap();
        let rho = parse("a^5*u4^2").unwrap();
        for ord in [3u32, 5, 7, 9] {
            let f = tables::listed_flow(Family::Kdv, 3, ord).unwrap();
            let c = densities::check_conserved(&rho, &f, &ctx).unwrap();
            println!("kdv a^5*u4^2 conserved along ut{ord}: {}", c.conserved);
        }
    }
    println!("total {:?}", t0.elapsed());
}
