use crate::Format;
use frobgl::harness::{GoldenRecord, Source, SuiteReport};
use frobgl::homology::LineCover;
use serde_json::{json, Value};

/// One result in all three renderings. CSV falls back to `key,value` rows
/// of the JSON object when no table form is given.
pub struct Output {
    text: String,
    json: Value,
    csv: Option<String>,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Self { text, json, csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn report(r: &SuiteReport) -> Self {
        let mut csv = String::from("id,status,diff\n");
        for e in &r.entries {
            let status = serde_json::to_value(e.status).unwrap();
            let diff = e.diff.as_deref().unwrap_or("").replace('"', "\"\"");
            csv.push_str(&format!("\"{}\",{},\"{diff}\"\n", e.id, status.as_str().unwrap()));
        }
        Self { text: r.render_text(), json: r.to_json(), csv: Some(csv) }
    }

    pub fn goldens(records: &[GoldenRecord]) -> Self {
        let count = |f: fn(&Source) -> bool| records.iter().filter(|r| f(&r.source)).count();
        let oracle = count(|s| matches!(s, Source::Oracle { .. }));
        let reference = count(|s| matches!(s, Source::Reference { .. }));
        let immediate = count(|s| matches!(s, Source::Immediate { .. }));
        let text = format!(
            "{} records: {oracle} regenerated from oracles, {reference} reference, {immediate} immediate\n",
            records.len()
        );
        Self::new(text, json!({"records": records.len(), "oracle": oracle, "reference": reference, "immediate": immediate}))
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Text => self.text.clone(),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).unwrap()),
            Format::Csv => match &self.csv {
                Some(c) => c.clone(),
                None => flat_csv(&self.json),
            },
        }
    }
}

fn flat_csv(v: &Value) -> String {
    let mut s = String::from("key,value\n");
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let cell = match x {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{k},\"{}\"\n", cell.replace('"', "\"\"")));
            }
        }
        other => s.push_str(&format!("value,\"{}\"\n", other.to_string().replace('"', "\"\""))),
    }
    s
}

pub fn lines(cover: &LineCover) -> String {
    if cover.lines.is_empty() {
        return "none".into();
    }
    cover
        .lines
        .iter()
        .map(|l| format!("r = {}·i + {}", l.slope, l.intercept))
        .collect::<Vec<_>>()
        .join(", ")
}
