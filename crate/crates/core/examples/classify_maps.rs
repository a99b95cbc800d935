//! Classification of reference maps into positive, CP, CCP, PPT,
//! decomposable and entanglement breaking.

use posmap::channels::library::{
    choi_map_d3, conjugate_pair_channel, conjugate_pair_unital_vector, depolarizing, identity_channel, transpose_map,
};
use posmap::channels::{classify, ClassifyParams, LinearMap};
use posmap::lab::verdict_table;

fn main() -> posmap::Result<()> {
    let maps: Vec<(&str, Box<dyn LinearMap>)> = vec![
        ("identity d=2", Box::new(identity_channel(2))),
        ("transpose d=2", Box::new(transpose_map(2))),
        ("depolarizing d=3", Box::new(depolarizing(3))),
        ("conjugate pair d=2", Box::new(conjugate_pair_channel(&conjugate_pair_unital_vector())?)),
        ("Choi map d=3", Box::new(choi_map_d3())),
    ];
    for (name, map) in &maps {
        let result = classify(map.as_ref(), &ClassifyParams::default());
        println!("== {name}\n{}", verdict_table(&result.rows()));
    }
    Ok(())
}
