//! Shared benchmark fixtures; see `benches/solve.rs` for the targets.

use cdp_core::dominance::{DominanceSpec, NogoodMode};
use cdp_core::encodings::reify_maxcsp;
use cdp_core::generate;
use cdp_core::ir::Instance;
use cdp_core::{cpnet, SearchConfig, ValOrder};

pub struct Fixture {
    pub name: &'static str,
    pub instance: Instance,
    pub spec: DominanceSpec,
    pub config: SearchConfig,
}

/// The solve-loop fixtures exercised by the benchmarks: one per dominance
/// family that the benchmark suite tracks.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();

    let maxcsp = reify_maxcsp(&generate::random_maxcsp(6, 8, 1).weighted()).unwrap();
    out.push(Fixture {
        name: "maxcsp-v6c8",
        config: SearchConfig {
            val_order: ValOrder::PreferredFirst(
                maxcsp.soft_bools.iter().map(|b| (*b, vec![1, 0])).collect(),
            ),
            ..SearchConfig::default()
        },
        instance: maxcsp.instance,
        spec: maxcsp.spec,
    });

    let tsp = generate::biobj_tsp(5, 1);
    let (instance, spec, _, _) = tsp.build();
    out.push(Fixture {
        name: "biobj-tsp-n5",
        instance,
        spec,
        config: SearchConfig::default(),
    });

    let net = cpnet::photo_net(5, 2, 1);
    let instance = cpnet::photo_instance(&net);
    let spec = DominanceSpec::cpnet(net, &instance, NogoodMode::EquivalenceFree).unwrap();
    out.push(Fixture {
        name: "cpnet-photo-n5",
        instance,
        spec,
        config: SearchConfig::default(),
    });

    let instance = generate::random_instance(6, 4, 4, 7);
    let spec = generate::random_spec(
        generate::SpecFamily::Pareto,
        &instance,
        NogoodMode::EquivalenceFree,
        7,
    );
    out.push(Fixture {
        name: "pareto-random-v6",
        instance,
        spec,
        config: SearchConfig::default(),
    });

    out
}
