use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// Result of one command, renderable in every format.
pub struct Output {
    pub result: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: Vec<String>,
    pub exit: u8,
}

impl Output {
    pub fn new(result: Value, exit: u8) -> Self {
        Output { result, header: Vec::new(), rows: Vec::new(), text: Vec::new(), exit }
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn lines(mut self, text: Vec<String>) -> Self {
        self.text = text;
        self
    }
}

/// The report text; the config is echoed in every format.
pub fn render(format: Format, config: &Value, out: &Output) -> String {
    match format {
        Format::Json => {
            let doc = serde_json::json!({ "config": config, "result": out.result });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if !out.header.is_empty() {
                w.write_record(&out.header).expect("in-memory csv");
            }
            for r in &out.rows {
                w.write_record(r).expect("in-memory csv");
            }
            let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8");
            format!("# config: {config}\n{body}")
        }
        Format::Text => {
            let mut s = format!("config: {config}\n");
            for l in &out.text {
                s.push_str(l);
                s.push('\n');
            }
            s
        }
    }
}
