//! Builders shared by the unit tests.

use std::collections::BTreeMap;

use crate::catalog::{
    CompilerSpec, MemoryKind, MemoryRequirement, ParameterSpec, Span, SurrogateModel, SurrogateTerm,
};

pub const OBJECTIVES: [&str; 2] = ["area", "power"];

pub fn objectives() -> Vec<String> {
    OBJECTIVES.iter().map(|s| s.to_string()).collect()
}

/// An SRAM compiler over a wide range with parameters `p0, p1, ...` having
/// the given code counts, unit base and unit multipliers.
pub fn compiler(name: &str, ports: u32, code_counts: &[u32]) -> CompilerSpec {
    let params: Vec<ParameterSpec> = code_counts
        .iter()
        .enumerate()
        .map(|(i, &k)| ParameterSpec {
            name: format!("p{i}"),
            labels: (0..k).map(|c| format!("c{c}")).collect(),
        })
        .collect();
    let term = || SurrogateTerm {
        base: [1.0, 0.0, 0.0, 0.0],
        multipliers: params
            .iter()
            .map(|p| (p.name.clone(), vec![1.0; p.labels.len()]))
            .collect(),
    };
    CompilerSpec {
        name: name.into(),
        kind: MemoryKind::Sram,
        ports,
        words_range: Span::new(16, 65536),
        bits_range: Span::new(1, 512),
        surrogate: SurrogateModel(OBJECTIVES.iter().map(|o| (o.to_string(), term())).collect::<BTreeMap<_, _>>()),
        params,
        choice_rules: vec![],
        combo_rules: vec![],
    }
}

pub fn memory(id: &str, words: u64, bits: u64, ports: u32) -> MemoryRequirement {
    MemoryRequirement {
        id: id.into(),
        words,
        bits,
        ports,
        kind: MemoryKind::Sram,
    }
}
