use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{
    IndexEntry, LexError, LexicalDatabase, PartOfSpeech, Pointer, Synset, SynsetType, SynsetWord,
    VerbFrame,
};

const HEADER: &str = "  1 Written by semprobe in the WordNet 3.0 database layout.\n";

fn read(path: &Path) -> Result<String, LexError> {
    fs::read_to_string(path).map_err(|source| LexError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Header lines start with two spaces; blank lines carry nothing.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with("  ") && !l.trim().is_empty())
}

struct Fields<'a> {
    file: &'a Path,
    line_no: usize,
    tokens: std::slice::Iter<'a, &'a str>,
}

impl<'a> Fields<'a> {
    fn err(&self, reason: impl Into<String>) -> LexError {
        LexError::MalformedLine {
            file: self.file.to_path_buf(),
            line_no: self.line_no,
            reason: reason.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, LexError> {
        match self.tokens.next() {
            Some(t) => Ok(t),
            None => Err(self.err(format!("missing {what}"))),
        }
    }

    fn dec<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, LexError> {
        let tok = self.next(what)?;
        tok.parse().map_err(|_| self.err(format!("bad decimal {what} {tok:?}")))
    }

    fn hex_u8(&mut self, what: &str) -> Result<u8, LexError> {
        let tok = self.next(what)?;
        u8::from_str_radix(tok, 16).map_err(|_| self.err(format!("bad hex {what} {tok:?}")))
    }

    fn finish(mut self) -> Result<(), LexError> {
        match self.tokens.next() {
            Some(extra) => Err(self.err(format!("unexpected trailing field {extra:?}"))),
            None => Ok(()),
        }
    }
}

pub(super) fn load_dir(dir: &Path) -> Result<LexicalDatabase, LexError> {
    let mut db = LexicalDatabase::default();
    for pos in PartOfSpeech::ALL {
        let index_path = dir.join(format!("index.{}", pos.file_suffix()));
        let text = read(&index_path)?;
        for (line_no, line) in content_lines(&text) {
            let entry = parse_index_line(&index_path, line_no, line, pos)?;
            db.index.insert((entry.lemma.clone(), pos), entry);
        }

        let data_path = dir.join(format!("data.{}", pos.file_suffix()));
        let text = read(&data_path)?;
        for (line_no, line) in content_lines(&text) {
            let synset = parse_data_line(&data_path, line_no, line, pos)?;
            db.synsets.insert((synset.offset, pos), synset);
        }

        let exc_path = dir.join(format!("{}.exc", pos.file_suffix()));
        if exc_path.is_file() {
            let text = read(&exc_path)?;
            for (line_no, line) in content_lines(&text) {
                let mut words = line.split_whitespace();
                let surface = words.next().unwrap_or_default();
                let bases: Vec<String> = words.map(str::to_string).collect();
                if bases.is_empty() {
                    return Err(LexError::MalformedLine {
                        file: exc_path.clone(),
                        line_no,
                        reason: "exception without base form".into(),
                    });
                }
                db.exceptions.insert((pos, surface.to_lowercase()), bases);
            }
        }
    }
    Ok(db)
}

fn parse_index_line(
    file: &Path,
    line_no: usize,
    line: &str,
    pos: PartOfSpeech,
) -> Result<IndexEntry, LexError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut f = Fields {
        file,
        line_no,
        tokens: tokens.iter(),
    };
    let lemma = f.next("lemma")?.to_lowercase();
    let pos_code = f.next("pos")?;
    if pos_code.len() != 1 || !pos_code.starts_with(pos.code()) {
        return Err(f.err(format!("pos {pos_code:?} in {} index", pos.file_suffix())));
    }
    let synset_cnt: usize = f.dec("synset_cnt")?;
    let p_cnt: usize = f.dec("p_cnt")?;
    let mut pointer_symbols = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        pointer_symbols.push(f.next("ptr_symbol")?.to_string());
    }
    let _sense_cnt: usize = f.dec("sense_cnt")?;
    let tagsense_cnt: u32 = f.dec("tagsense_cnt")?;
    let mut offsets = Vec::with_capacity(synset_cnt);
    for _ in 0..synset_cnt {
        offsets.push(f.dec("synset_offset")?);
    }
    f.finish()?;
    Ok(IndexEntry {
        lemma,
        pos,
        pointer_symbols,
        tagsense_cnt,
        offsets,
    })
}

fn split_marker(word: &str) -> (String, Option<String>) {
    if let Some(open) = word.find('(') {
        if word.ends_with(')') && open > 0 {
            return (
                word[..open].to_string(),
                Some(word[open + 1..word.len() - 1].to_string()),
            );
        }
    }
    (word.to_string(), None)
}

fn parse_data_line(
    file: &Path,
    line_no: usize,
    line: &str,
    pos: PartOfSpeech,
) -> Result<Synset, LexError> {
    let (fields, gloss) = match line.find('|') {
        Some(bar) => (&line[..bar], line[bar + 1..].trim()),
        None => (line, ""),
    };
    let tokens: Vec<&str> = fields.split_whitespace().collect();
    let mut f = Fields {
        file,
        line_no,
        tokens: tokens.iter(),
    };
    let offset: u64 = f.dec("synset_offset")?;
    let lex_filenum: u8 = f.dec("lex_filenum")?;
    let ss_code = f.next("ss_type")?;
    let ss_type = SynsetType::from_code(ss_code)
        .filter(|t| t.pos() == pos)
        .ok_or_else(|| f.err(format!("ss_type {ss_code:?} in {} data", pos.file_suffix())))?;
    let w_cnt = f.hex_u8("w_cnt")?;
    if w_cnt == 0 {
        return Err(f.err("synset without words"));
    }
    let mut words = Vec::with_capacity(w_cnt as usize);
    for _ in 0..w_cnt {
        let (lemma, marker) = split_marker(f.next("word")?);
        let lex_id = f.hex_u8("lex_id")?;
        words.push(SynsetWord { lemma, lex_id, marker });
    }
    let p_cnt: usize = f.dec("p_cnt")?;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let symbol = f.next("pointer_symbol")?.to_string();
        let target_offset: u64 = f.dec("pointer offset")?;
        let code = f.next("pointer pos")?;
        let target_type =
            SynsetType::from_code(code).ok_or_else(|| f.err(format!("pointer pos {code:?}")))?;
        let st = f.next("source/target")?;
        if st.len() != 4 {
            return Err(f.err(format!("source/target field {st:?}")));
        }
        let source_word = u8::from_str_radix(&st[..2], 16)
            .map_err(|_| f.err(format!("source/target field {st:?}")))?;
        let target_word = u8::from_str_radix(&st[2..], 16)
            .map_err(|_| f.err(format!("source/target field {st:?}")))?;
        pointers.push(Pointer {
            symbol,
            target_offset,
            target_type,
            source_word,
            target_word,
        });
    }
    // Verb frames are optional in hand-written files.
    let mut frames = Vec::new();
    if pos == PartOfSpeech::Verb && f.tokens.len() > 0 {
        let f_cnt: usize = f.dec("f_cnt")?;
        for _ in 0..f_cnt {
            if f.next("frame marker")? != "+" {
                return Err(f.err("frame entry without '+'"));
            }
            let frame: u8 = f.dec("f_num")?;
            let word = f.hex_u8("w_num")?;
            frames.push(VerbFrame { frame, word });
        }
    }
    f.finish()?;
    Ok(Synset {
        offset,
        lex_filenum,
        ss_type,
        words,
        pointers,
        frames,
        gloss: gloss.to_string(),
    })
}

pub(super) fn format_data_line(s: &Synset) -> String {
    let mut out = format!(
        "{:08} {:02} {} {:02x}",
        s.offset,
        s.lex_filenum,
        s.ss_type.code(),
        s.words.len()
    );
    for w in &s.words {
        match &w.marker {
            Some(m) => write!(out, " {}({}) {:x}", w.lemma, m, w.lex_id),
            None => write!(out, " {} {:x}", w.lemma, w.lex_id),
        }
        .unwrap();
    }
    write!(out, " {:03}", s.pointers.len()).unwrap();
    for p in &s.pointers {
        write!(
            out,
            " {} {:08} {} {:02x}{:02x}",
            p.symbol,
            p.target_offset,
            p.target_type.code(),
            p.source_word,
            p.target_word
        )
        .unwrap();
    }
    if !s.frames.is_empty() {
        write!(out, " {:02}", s.frames.len()).unwrap();
        for fr in &s.frames {
            write!(out, " + {:02} {:02x}", fr.frame, fr.word).unwrap();
        }
    }
    write!(out, " | {}  ", s.gloss).unwrap();
    out
}

pub(super) fn format_index_line(e: &IndexEntry) -> String {
    let mut fields: Vec<String> = vec![
        e.lemma.clone(),
        e.pos.code().to_string(),
        e.offsets.len().to_string(),
        e.pointer_symbols.len().to_string(),
    ];
    fields.extend(e.pointer_symbols.iter().cloned());
    fields.push(e.offsets.len().to_string());
    fields.push(e.tagsense_cnt.to_string());
    fields.extend(e.offsets.iter().map(|o| format!("{o:08}")));
    fields.join(" ") + "  "
}

fn write(path: PathBuf, body: String) -> Result<(), LexError> {
    fs::write(&path, body).map_err(|source| LexError::Io { path, source })
}

pub(super) fn write_dir(db: &LexicalDatabase, dir: &Path) -> Result<(), LexError> {
    fs::create_dir_all(dir).map_err(|source| LexError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for pos in PartOfSpeech::ALL {
        let mut index = HEADER.to_string();
        for e in db.index.values().filter(|e| e.pos == pos) {
            index.push_str(&format_index_line(e));
            index.push('\n');
        }
        write(dir.join(format!("index.{}", pos.file_suffix())), index)?;

        let mut data = HEADER.to_string();
        for s in db.synsets.values().filter(|s| s.pos() == pos) {
            data.push_str(&format_data_line(s));
            data.push('\n');
        }
        write(dir.join(format!("data.{}", pos.file_suffix())), data)?;

        let exc: BTreeMap<&String, &Vec<String>> = db
            .exceptions
            .iter()
            .filter(|((p, _), _)| *p == pos)
            .map(|((_, surface), bases)| (surface, bases))
            .collect();
        if !exc.is_empty() {
            let mut body = String::new();
            for (surface, bases) in exc {
                body.push_str(surface);
                for b in bases {
                    body.push(' ');
                    body.push_str(b);
                }
                body.push('\n');
            }
            write(dir.join(format!("{}.exc", pos.file_suffix())), body)?;
        }
    }
    Ok(())
}
