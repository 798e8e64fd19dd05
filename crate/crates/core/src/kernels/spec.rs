//! Structured kernel descriptors: `{family: "gaussian", sigma: 1.0, dim: 1}`
//! leaves and `{op: "shift" | "scale" | "center", ..., child: {...}}` nodes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::field::FieldSpec;
use crate::measures::AtomRow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelSpec {
    Node(NodeSpec),
    Base(BaseSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseSpec {
    pub family: String,
    pub dim: usize,
    #[serde(flatten)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum NodeSpec {
    Shift {
        c: f64,
        child: Box<KernelSpec>,
    },
    Scale {
        #[serde(flatten)]
        field: FieldSpec,
        child: Box<KernelSpec>,
    },
    Center {
        a: f64,
        p: Vec<AtomRow>,
        child: Box<KernelSpec>,
    },
}

impl KernelSpec {
    pub fn gaussian(sigma: f64, dim: usize) -> Self {
        KernelSpec::Base(BaseSpec {
            family: "gaussian".into(),
            dim,
            params: BTreeMap::from([("sigma".into(), sigma)]),
        })
    }

    /// Dimension declared by the innermost base descriptor.
    pub fn dim(&self) -> usize {
        match self {
            KernelSpec::Base(b) => b.dim,
            KernelSpec::Node(
                NodeSpec::Shift { child, .. }
                | NodeSpec::Scale { child, .. }
                | NodeSpec::Center { child, .. },
            ) => child.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_nested_descriptor() {
        let text = r#"
            op = "center"
            a = 1
            p = [{ coords = [0.0], weight = 0.5 }, { coords = [2.0], weight = 0.5 }]
            [child]
            op = "scale"
            g = "c0_multi_zero"
            zeros = [[0.0], [1.0]]
            [child.child]
            family = "laplacian"
            gamma = 2
            dim = 1
        "#;
        let spec: KernelSpec = toml::from_str(text).unwrap();
        assert_eq!(spec.dim(), 1);
        let KernelSpec::Node(NodeSpec::Center { a, p, child }) = &spec else {
            panic!("expected center node, got {spec:?}");
        };
        assert_eq!(*a, 1.0);
        assert_eq!(p.len(), 2);
        let KernelSpec::Node(NodeSpec::Scale { field, .. }) = child.as_ref() else {
            panic!("expected scale node");
        };
        assert!(matches!(field, FieldSpec::C0MultiZero { zeros } if zeros.len() == 2));
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<KernelSpec>(&json).unwrap(), spec);
    }
}
