//! JSONL corpus shards. One document per line, `{"text": str, "meta": {...}}`.
//! Files ending in `.gz` are gunzipped and `.zst`/`.zstd` are zstd-decoded
//! on the fly.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct Document {
    text: String,
}

/// Extracts the `text` field of one JSONL line.
pub fn parse_document(line: &str) -> Result<String, String> {
    serde_json::from_str::<Document>(line)
        .map(|d| d.text)
        .map_err(|e| e.to_string())
}

pub fn open_shard(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let file = File::open(path)?;
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let reader: Box<dyn Read + Send> = if name.ends_with(".gz") {
        Box::new(MultiGzDecoder::new(file))
    } else if name.ends_with(".zst") || name.ends_with(".zstd") {
        Box::new(zstd::stream::read::Decoder::new(file)?)
    } else {
        Box::new(file)
    };
    Ok(Box::new(BufReader::with_capacity(1 << 20, reader)))
}

/// Lines of every shard, in order. An unreadable shard yields one error item
/// carrying its path.
pub struct CorpusLines {
    shards: std::vec::IntoIter<PathBuf>,
    current: Option<io::Lines<Box<dyn BufRead + Send>>>,
    current_path: Option<PathBuf>,
}

impl CorpusLines {
    pub fn new(paths: impl IntoIterator<Item = PathBuf>) -> Self {
        Self {
            shards: paths.into_iter().collect::<Vec<_>>().into_iter(),
            current: None,
            current_path: None,
        }
    }
}

impl Iterator for CorpusLines {
    type Item = io::Result<String>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(lines) = &mut self.current {
                match lines.next() {
                    Some(Ok(line)) => return Some(Ok(line)),
                    Some(Err(e)) => {
                        self.current = None;
                        let path = self.current_path.take().unwrap_or_default();
                        return Some(Err(annotate(e, &path)));
                    }
                    None => self.current = None,
                }
            }
            let path = self.shards.next()?;
            match open_shard(&path) {
                Ok(reader) => {
                    self.current = Some(reader.lines());
                    self.current_path = Some(path);
                }
                Err(e) => return Some(Err(annotate(e, &path))),
            }
        }
    }
}

fn annotate(e: io::Error, path: &Path) -> io::Error {
    io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn reads_plain_gzip_and_zstd() {
        let dir = tempfile::tempdir().unwrap();
        let body = "{\"text\": \"a\", \"meta\": {}}\n{\"text\": \"b\"}\n";
        let plain = dir.path().join("a.jsonl");
        std::fs::write(&plain, body).unwrap();
        let gz = dir.path().join("b.jsonl.gz");
        let mut enc = flate2::write::GzEncoder::new(File::create(&gz).unwrap(), Default::default());
        enc.write_all(body.as_bytes()).unwrap();
        enc.finish().unwrap();
        let zst = dir.path().join("c.jsonl.zst");
        std::fs::write(&zst, zstd::encode_all(body.as_bytes(), 3).unwrap()).unwrap();

        let texts: Vec<String> = CorpusLines::new([plain, gz, zst])
            .map(|l| parse_document(&l.unwrap()).unwrap())
            .collect();
        assert_eq!(texts, ["a", "b", "a", "b", "a", "b"]);
    }

    #[test]
    fn missing_shard_is_an_error() {
        let mut lines = CorpusLines::new([PathBuf::from("/nonexistent/shard.jsonl")]);
        let err = lines.next().unwrap().unwrap_err();
        assert!(err.to_string().contains("shard.jsonl"));
        assert!(lines.next().is_none());
    }

    #[test]
    fn document_without_text() {
        assert!(parse_document("{\"meta\": {}}").is_err());
        assert!(parse_document("not json").is_err());
    }
}
