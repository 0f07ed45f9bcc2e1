use std::collections::BTreeMap;

use super::{
    Catalog, CompilerSpec, MemoryKind, MemoryRequirement, ParameterSpec, Span, SurrogateModel,
    SurrogateTerm, SystemSpec,
};

/// The two-memory motivating example: each memory has three candidates with
/// (area, leakage) of `(1.0, 1.0), (1.9, 0.01), (0.1, 1.9)` and
/// `(2.0, 2.0), (1.0, 2.5), (2.5, 1.5)` respectively.
///
/// Each memory gets its own single-parameter compiler whose surrogate has a
/// unit base, so the code multipliers are the candidate values.
pub fn two_memory_toy() -> (Catalog, SystemSpec) {
    let compiler = |name: &str, ports: u32, area: [f64; 3], leakage: [f64; 3]| {
        let term = |m: [f64; 3]| SurrogateTerm {
            base: [1.0, 0.0, 0.0, 0.0],
            multipliers: BTreeMap::from([("variant".to_string(), m.to_vec())]),
        };
        CompilerSpec {
            name: name.into(),
            kind: MemoryKind::Sram,
            ports,
            words_range: Span::new(16, 65536),
            bits_range: Span::new(1, 256),
            params: vec![ParameterSpec::new("variant", &["balanced", "low-leakage", "low-area"])],
            choice_rules: vec![],
            combo_rules: vec![],
            surrogate: SurrogateModel(BTreeMap::from([
                ("area".to_string(), term(area)),
                ("leakage".to_string(), term(leakage)),
            ])),
        }
    };
    let catalog = Catalog::new(
        vec!["area".into(), "leakage".into()],
        vec![
            compiler("sp-sram", 1, [1.0, 1.9, 0.1], [1.0, 0.01, 1.9]),
            compiler("dp-sram", 2, [2.0, 1.0, 2.5], [2.0, 2.5, 1.5]),
        ],
    )
    .expect("toy catalog is valid");
    let system = SystemSpec::new(vec![
        MemoryRequirement {
            id: "mem1".into(),
            words: 1024,
            bits: 32,
            ports: 1,
            kind: MemoryKind::Sram,
        },
        MemoryRequirement {
            id: "mem2".into(),
            words: 2048,
            bits: 64,
            ports: 2,
            kind: MemoryKind::Sram,
        },
    ])
    .expect("toy system is valid");
    (catalog, system)
}
