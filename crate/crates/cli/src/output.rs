use hilbrep_core::repseries::GradedRep;
use hilbrep_core::ClassFunction;
use serde_json::{json, Map, Value};

/// Plain lines plus the structured equivalent.
pub struct Report {
    lines: Vec<String>,
    json: Value,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report { lines: Vec::new(), json }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Multi-line text, kept as is.
    pub fn text(&mut self, s: String) {
        self.lines.extend(s.lines().map(str::to_string));
    }

    pub fn set_json(&mut self, json: Value) {
        self.json = json;
    }

    pub fn print(&self, structured: bool) {
        if structured {
            println!("{}", serde_json::to_string_pretty(&self.json).expect("serializable"));
        } else {
            for l in &self.lines {
                println!("{l}");
            }
        }
    }
}

pub fn values_plain(f: &ClassFunction) -> String {
    let v: Vec<String> = f.values().iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(", "))
}

pub fn character_json(f: &ClassFunction) -> Value {
    let mults = f
        .decompose()
        .map(|m| Value::Array(m.iter().map(|x| Value::String(x.to_string())).collect()))
        .unwrap_or(Value::Null);
    json!({
        "decomposition": f.describe(),
        "multiplicities": mults,
        "values": f.values().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

pub fn graded_json(g: &GradedRep) -> Value {
    let mut m = Map::new();
    for (d, f) in g.components() {
        m.insert(d.to_string(), character_json(f));
    }
    Value::Object(m)
}
