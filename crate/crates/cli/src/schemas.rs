//! JSON schemas of the interchange formats, embedded at build time.

const SCHEMAS: &[(&str, &str)] = &[
    ("common", include_str!("../schemas/common.schema.json")),
    ("etv", include_str!("../schemas/etv.schema.json")),
    ("family", include_str!("../schemas/family.schema.json")),
    ("framed-set", include_str!("../schemas/framed-set.schema.json")),
    ("pl-function", include_str!("../schemas/pl-function.schema.json")),
    ("polytope", include_str!("../schemas/polytope.schema.json")),
    ("report", include_str!("../schemas/report.schema.json")),
    ("test-form", include_str!("../schemas/test-form.schema.json")),
];

pub fn names() -> Vec<&'static str> {
    SCHEMAS.iter().map(|(n, _)| *n).collect()
}

/// The named schema, or an object of all schemas keyed by name for `"all"`.
pub fn render(name: &str) -> Option<String> {
    if name == "all" {
        let mut all = serde_json::Map::new();
        for (n, s) in SCHEMAS {
            all.insert(n.to_string(), serde_json::from_str(s).expect("embedded schema is JSON"));
        }
        return Some(serde_json::to_string_pretty(&all).expect("serializable"));
    }
    SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.trim_end().to_string())
}
