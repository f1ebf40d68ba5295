use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use repsim::datamodel::io::{atomic_write, decode_matrix, MAGIC};
use repsim::datamodel::{
    flatten_volume, import_csv, read_matrix, sample_voxels, write_matrix, GroupsFile, MatrixSource, NeuralVolume,
    RepresentationMatrix, SamplingConfig, StimulusManifest,
};
use repsim::experiments::{
    benchmark_correlation, condition_delta, instruction_delta, polarity_modes, polarity_similarity, read_deltas,
    render_report, select_polarity_extremes, write_deltas, BenchmarkId, BenchmarkTable, ConditionId,
    PolarityTable, StudyConfig, fmt4,
};
use repsim::rdm::{
    compute_rdm, group_scores, permutation_pvalue, read_records, row_profile_similarity, rsa_score_with,
    vectorizers, write_records, Modality, Rdm, SimilarityRecord,
};
use repsim::{Error, Result};

use crate::output::{cache_dir, file_digest, sha256_hex, RunLog, Table};
use crate::{Cli, Command, FileKind, GlobalOpts, ModalityArg, RdmPair, SimArgs};

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Flatten { input, manifest, out } => flatten(g, input, manifest, out),
        Command::SampleVoxels {
            input,
            manifest,
            n_voxels,
            out,
        } => sample(g, input, manifest, *n_voxels, out),
        Command::Rdm {
            input,
            manifest,
            out,
            modality,
        } => rdm(g, input, manifest, out, *modality),
        Command::Sim(args) => sim(g, args),
        Command::RowSim { pair, stimulus } => row_sim(g, pair, stimulus),
        Command::Group { records, groups, out } => group(g, records, groups, out.as_deref()),
        Command::PermTest { pair, n_perm, out } => perm_test(g, pair, *n_perm, out.as_deref()),
        Command::InstructionDelta {
            records,
            treatment,
            baseline,
            out,
        } => delta(g, records, treatment, baseline, out.as_deref()),
        Command::Emotion {
            pair,
            polarity,
            k,
            mode,
            out,
        } => emotion(g, pair, polarity, *k, mode, out.as_deref()),
        Command::BenchCorr {
            records,
            bench,
            benchmark,
            group,
            condition,
            scatter_out,
        } => bench_corr(g, records, bench, benchmark, group, condition.as_deref(), scatter_out.as_deref()),
        Command::Report {
            config,
            records,
            bench,
            deltas,
            out_dir,
        } => report(g, config, records, bench.as_deref(), deltas.as_deref(), out_dir),
        Command::Validate { paths, kind, manifest } => validate(g, paths, *kind, manifest.as_deref()),
    }
}

fn note(g: &GlobalOpts, msg: impl AsRef<str>) {
    if !g.quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<stdout>", e))
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| Error::io(path, e))
}

fn load_records(paths: &[PathBuf]) -> Result<Vec<SimilarityRecord>> {
    let mut all = Vec::new();
    for p in paths {
        all.extend(read_records(open(p)?).map_err(|e| e.context(p.display()))?);
    }
    Ok(all)
}

fn records_csv(records: &[SimilarityRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_records(&mut buf, records)?;
    Ok(buf)
}

fn flatten(g: &GlobalOpts, input: &Path, manifest_path: &Path, out: &Path) -> Result<()> {
    let manifest = StimulusManifest::load(manifest_path)?;
    let volume = NeuralVolume::load(input)?;
    let reps = flatten_volume(&volume, &manifest)?;
    let missing = reps.values().count_non_finite();
    write_matrix(out, reps.values())?;
    RunLog::new("flatten", g.seed)
        .input(input)
        .input(manifest_path)
        .output(out)
        .finish(out)?;
    note(
        g,
        format!(
            "{}: {} stimuli x {} voxels ({missing} missing values) -> {}",
            volume.subject_id,
            reps.n_stimuli(),
            reps.dim(),
            out.display()
        ),
    );
    Ok(())
}

fn sample(g: &GlobalOpts, input: &Path, manifest_path: &Path, n_voxels: usize, out: &Path) -> Result<()> {
    let manifest = StimulusManifest::load(manifest_path)?;
    let matrix = read_matrix(input)?;
    let subject = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let reps = RepresentationMatrix::with_missing(&manifest, MatrixSource::Subject { subject_id: subject }, matrix)?;
    let sampled = sample_voxels(&reps, &SamplingConfig::new(n_voxels, g.seed)?)?;
    write_matrix(out, sampled.values())?;
    RunLog::new("sample-voxels", g.seed)
        .input(input)
        .input(manifest_path)
        .output(out)
        .finish(out)?;
    note(g, format!("kept {n_voxels} of {} voxels -> {}", reps.dim(), out.display()));
    Ok(())
}

fn modality(m: ModalityArg) -> Modality {
    match m {
        ModalityArg::Brain => Modality::Brain,
        ModalityArg::Model => Modality::Model,
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_representations(path: &Path, manifest: &StimulusManifest, modality: Modality) -> Result<RepresentationMatrix> {
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let source = match modality {
        Modality::Brain => MatrixSource::Subject { subject_id: label },
        Modality::Model => MatrixSource::Model {
            model_id: label,
            condition_id: ConditionId::None.as_str().to_owned(),
        },
    };
    if is_csv(path) {
        import_csv(open(path)?, manifest, source).map_err(|e| e.context(path.display()))
    } else {
        RepresentationMatrix::with_missing(manifest, source, read_matrix(path)?).map_err(|e| e.context(path.display()))
    }
}

fn rdm(g: &GlobalOpts, input: &Path, manifest_path: &Path, out: &Path, m: ModalityArg) -> Result<()> {
    let manifest = StimulusManifest::load(manifest_path)?;
    let reps = load_representations(input, &manifest, modality(m))?;
    let rdm = compute_rdm(&reps, modality(m))?;
    rdm.save(out)?;
    RunLog::new("rdm", g.seed)
        .input(input)
        .input(manifest_path)
        .output(out)
        .output(Rdm::sidecar_path(out))
        .finish(out)?;
    note(g, format!("{} x {} RDM -> {}", rdm.n(), rdm.n(), out.display()));
    Ok(())
}

/// Load an RDM file, or build one from a representation matrix when the
/// path has no RDM descriptor beside it. Built RDMs are cached under
/// `$REPSIM_CACHE_DIR/rdm/` keyed by input and manifest digests.
fn obtain_rdm(path: &Path, manifest: Option<(&Path, &StimulusManifest)>, modality: Modality) -> Result<Rdm> {
    if Rdm::sidecar_path(path).exists() {
        let rdm = Rdm::load(path)?;
        if let Some((_, m)) = manifest {
            if rdm.dataset_id() != m.dataset_id() || rdm.n() != m.len() {
                return Err(Error::Contract(format!(
                    "{}: RDM of {} (n={}) does not match manifest {} (n={})",
                    path.display(),
                    rdm.dataset_id(),
                    rdm.n(),
                    m.dataset_id(),
                    m.len()
                )));
            }
        }
        return Ok(rdm);
    }
    let Some((manifest_path, manifest)) = manifest else {
        return Err(Error::Configuration(format!(
            "{} has no RDM descriptor; pass --manifest to build the RDM from representations",
            path.display()
        )));
    };
    let cached = match cache_dir() {
        Some(dir) => {
            let key = sha256_hex(
                format!(
                    "{}:{}:{:?}",
                    file_digest(path)?,
                    file_digest(manifest_path)?,
                    modality
                )
                .as_bytes(),
            );
            Some(dir.join("rdm").join(format!("{}.rsam", &key[..32])))
        }
        None => None,
    };
    if let Some(c) = &cached {
        if c.exists() && Rdm::sidecar_path(c).exists() {
            if let Ok(rdm) = Rdm::load(c) {
                return Ok(rdm);
            }
        }
    }
    let rdm = compute_rdm(&load_representations(path, manifest, modality)?, modality)?;
    if let Some(c) = &cached {
        if let Some(parent) = c.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        rdm.save(c)?;
    }
    Ok(rdm)
}

struct LoadedPair {
    brain: Rdm,
    model: Rdm,
    manifest: Option<StimulusManifest>,
}

fn load_pair(pair: &RdmPair) -> Result<LoadedPair> {
    let manifest = pair.manifest.as_deref().map(StimulusManifest::load).transpose()?;
    let with_path = pair.manifest.as_deref().zip(manifest.as_ref());
    let brain = obtain_rdm(&pair.brain, with_path, Modality::Brain)?;
    let model = obtain_rdm(&pair.model, with_path, Modality::Model)?;
    Ok(LoadedPair { brain, model, manifest })
}

fn pair_inputs(log: &mut RunLog, pair: &RdmPair) {
    log.input(&pair.brain).input(&pair.model);
    if let Some(m) = &pair.manifest {
        log.input(m);
    }
}

fn sim(g: &GlobalOpts, args: &SimArgs) -> Result<()> {
    let registry = vectorizers();
    let vectorizer = registry.get(&args.vectorizer)?;
    let loaded = load_pair(&args.pair)?;
    let score = rsa_score_with(vectorizer, &loaded.brain, &loaded.model)?;
    let record = SimilarityRecord {
        model_id: args.model_id.clone(),
        subject_id: args.subject_id.clone(),
        condition_id: args.condition.clone(),
        n_stimuli: loaded.brain.n(),
        seed: g.seed,
        score,
    };
    record.validate()?;

    if let Some(out) = &args.out {
        let mut records = Vec::new();
        if args.append && out.exists() {
            records = read_records(open(out)?).map_err(|e| e.context(out.display()))?;
            if records.iter().any(|r| r.key() == record.key()) {
                return Err(Error::Contract(format!(
                    "{} already has a record for {}/{}/{}",
                    out.display(),
                    record.model_id,
                    record.subject_id,
                    record.condition_id
                )));
            }
        }
        records.push(record.clone());
        records.sort_by(|a, b| a.key().cmp(&b.key()));
        atomic_write(out, &records_csv(&records)?)?;
        let mut log = RunLog::new("sim", g.seed);
        pair_inputs(&mut log, &args.pair);
        log.output(out).finish(out)?;
    }

    let mut table = Table::new(["model_id", "subject_id", "condition_id", "n_stimuli", "seed", "score"]);
    table.push(vec![
        record.model_id,
        record.subject_id,
        record.condition_id,
        record.n_stimuli.to_string(),
        record.seed.to_string(),
        record.score.to_string(),
    ]);
    print_stdout(&table.render(g.format))
}

fn row_sim(g: &GlobalOpts, pair: &RdmPair, stimulus: &str) -> Result<()> {
    let loaded = load_pair(pair)?;
    let manifest = loaded
        .manifest
        .as_ref()
        .ok_or_else(|| Error::Configuration("row-sim needs --manifest to locate the stimulus".into()))?;
    let index = manifest
        .position(stimulus)
        .ok_or_else(|| Error::Contract(format!("stimulus {stimulus} not in manifest {}", manifest.dataset_id())))?;
    let score = row_profile_similarity(&loaded.brain, &loaded.model, index)?;
    let mut table = Table::new(["stimulus_id", "score"]);
    table.push(vec![stimulus.to_owned(), score.to_string()]);
    print_stdout(&table.render(g.format))
}

fn group(g: &GlobalOpts, record_paths: &[PathBuf], groups_path: &Path, out: Option<&Path>) -> Result<()> {
    let records = load_records(record_paths)?;
    let groups = GroupsFile::load(groups_path)?;
    let scores = group_scores(&records, &groups)?;
    let csv = records_csv(&scores)?;
    if let Some(out) = out {
        atomic_write(out, &csv)?;
        let mut log = RunLog::new("group", g.seed);
        for p in record_paths {
            log.input(p);
        }
        log.input(groups_path).output(out).finish(out)?;
    }
    let mut table = Table::new(["model_id", "subject_id", "condition_id", "n_stimuli", "seed", "score"]);
    for r in &scores {
        table.push(vec![
            r.model_id.clone(),
            r.subject_id.clone(),
            r.condition_id.clone(),
            r.n_stimuli.to_string(),
            r.seed.to_string(),
            r.score.to_string(),
        ]);
    }
    print_stdout(&table.render(g.format))
}

fn perm_test(g: &GlobalOpts, pair: &RdmPair, n_perm: usize, out: Option<&Path>) -> Result<()> {
    let loaded = load_pair(pair)?;
    let result = permutation_pvalue(&loaded.brain, &loaded.model, n_perm, g.seed)?;
    if let Some(out) = out {
        let mut json = serde_json::to_string_pretty(&result)?;
        json.push('\n');
        atomic_write(out, json.as_bytes())?;
        let mut log = RunLog::new("perm-test", g.seed);
        pair_inputs(&mut log, pair);
        log.output(out).finish(out)?;
    }
    let mut table = Table::new(["observed", "p_value", "n_perm", "n_extreme", "seed"]);
    table.push(vec![
        result.observed.to_string(),
        result.p_value.to_string(),
        result.n_perm.to_string(),
        result.n_extreme.to_string(),
        result.seed.to_string(),
    ]);
    print_stdout(&table.render(g.format))
}

fn delta(
    g: &GlobalOpts,
    record_paths: &[PathBuf],
    treatment: &str,
    baseline: &str,
    out: Option<&Path>,
) -> Result<()> {
    let records = load_records(record_paths)?;
    let deltas = condition_delta(&records, treatment, baseline)?;
    if deltas.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no model has both {treatment} and {baseline} records"
        )));
    }
    if let Some(out) = out {
        let mut buf = Vec::new();
        write_deltas(&mut buf, &deltas)?;
        atomic_write(out, &buf)?;
        let mut log = RunLog::new("instruction-delta", g.seed);
        for p in record_paths {
            log.input(p);
        }
        log.output(out).finish(out)?;
    }
    let mut table = Table::new(["model_id", "group_id", "treatment", "baseline", "delta"]);
    for d in &deltas {
        table.push(vec![
            d.model_id.clone(),
            d.group_id.clone(),
            d.treatment.clone(),
            d.baseline.clone(),
            fmt4(d.delta),
        ]);
    }
    print_stdout(&table.render(g.format))
}

fn emotion(
    g: &GlobalOpts,
    pair: &RdmPair,
    polarity_path: &Path,
    k: usize,
    mode_name: &str,
    out: Option<&Path>,
) -> Result<()> {
    let modes = polarity_modes();
    let mode = modes.get(mode_name)?;
    let loaded = load_pair(pair)?;
    let manifest = loaded
        .manifest
        .as_ref()
        .ok_or_else(|| Error::Configuration("emotion needs --manifest to locate concepts".into()))?;
    let table = PolarityTable::read_csv(open(polarity_path)?, k).map_err(|e| e.context(polarity_path.display()))?;
    table.validate_against(manifest)?;
    let extremes = select_polarity_extremes(&table)?;

    let mut out_table = Table::new(["polarity", "mode", "k", "score", "concepts"]);
    for (label, concepts) in [("positive", &extremes.positive), ("negative", &extremes.negative)] {
        let score = polarity_similarity(&loaded.brain, &loaded.model, manifest, concepts, mode)?;
        out_table.push(vec![
            label.to_owned(),
            mode_name.to_owned(),
            k.to_string(),
            score.to_string(),
            concepts.join(";"),
        ]);
    }
    if let Some(out) = out {
        atomic_write(out, out_table.render(crate::OutputFormat::Csv).as_bytes())?;
        let mut log = RunLog::new("emotion", g.seed);
        pair_inputs(&mut log, pair);
        log.input(polarity_path).output(out).finish(out)?;
    }
    print_stdout(&out_table.render(g.format))
}

fn bench_corr(
    g: &GlobalOpts,
    record_paths: &[PathBuf],
    bench_path: &Path,
    benchmark: &str,
    group_id: &str,
    condition: Option<&str>,
    scatter_out: Option<&Path>,
) -> Result<()> {
    let records = load_records(record_paths)?;
    let bench = BenchmarkTable::read_csv(open(bench_path)?).map_err(|e| e.context(bench_path.display()))?;
    let id: BenchmarkId = benchmark.parse()?;
    let corr = benchmark_correlation(&records, &bench, &id, group_id, condition)?;
    if let Some(out) = scatter_out {
        let mut scatter = Table::new(["model_id", "sim", "score"]);
        for p in &corr.points {
            scatter.push(vec![p.model_id.clone(), p.sim.to_string(), p.score.to_string()]);
        }
        atomic_write(out, scatter.render(crate::OutputFormat::Csv).as_bytes())?;
        let mut log = RunLog::new("bench-corr", g.seed);
        for p in record_paths {
            log.input(p);
        }
        log.input(bench_path).output(out).finish(out)?;
    }
    let mut table = Table::new(["benchmark", "group", "n_models", "r"]);
    table.push(vec![
        corr.benchmark_id.to_string(),
        corr.group_id.clone(),
        corr.points.len().to_string(),
        corr.r.to_string(),
    ]);
    print_stdout(&table.render(g.format))
}

fn report(
    g: &GlobalOpts,
    config_path: &Path,
    record_paths: &[PathBuf],
    bench_path: Option<&Path>,
    deltas_path: Option<&Path>,
    out_dir: &Path,
) -> Result<()> {
    let config = StudyConfig::load(config_path)?;
    let records = load_records(record_paths)?;

    let deltas = match deltas_path {
        Some(p) => read_deltas(open(p)?).map_err(|e| e.context(p.display()))?,
        None if records.iter().any(|r| r.condition_id == ConditionId::Explicit.as_str()) => {
            instruction_delta(&records)?
        }
        None => Vec::new(),
    };

    let mut correlations = Vec::new();
    if let Some(p) = bench_path {
        let bench = BenchmarkTable::read_csv(open(p)?).map_err(|e| e.context(p.display()))?;
        for b in bench.benchmarks() {
            for grp in &config.groups {
                correlations.push(benchmark_correlation(
                    &records,
                    &bench,
                    b,
                    &grp.group_id,
                    Some(&config.report_condition),
                )?);
            }
        }
    }

    let bundle = render_report(&config, &records, &deltas, &correlations)?;
    for n in &bundle.notices {
        note(g, format!("notice: {n}"));
    }
    bundle.write_to(out_dir)?;

    let mut log = RunLog::new("report", g.seed);
    log.input(config_path);
    for p in record_paths {
        log.input(p);
    }
    if let Some(p) = bench_path {
        log.input(p);
    }
    if let Some(p) = deltas_path {
        log.input(p);
    }
    log.output(out_dir).finish(out_dir)?;

    let primary = match g.format {
        crate::OutputFormat::Csv => "similarity.csv",
        crate::OutputFormat::Md => "report.md",
    };
    print_stdout(bundle.files.get(primary).map(String::as_str).unwrap_or_default())
}

/// Guess what a file is from its first bytes, JSON keys or CSV header.
fn detect(path: &Path, bytes: &[u8]) -> Result<FileKind> {
    if bytes.starts_with(MAGIC) {
        return Ok(if Rdm::sidecar_path(path).exists() {
            FileKind::Rdm
        } else {
            FileKind::Matrix
        });
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::Format("not a matrix file, and not UTF-8 text".into()))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let has = |k: &str| value.get(k).is_some();
        return if has("stimuli") {
            Ok(FileKind::Manifest)
        } else if has("models") {
            Ok(FileKind::Config)
        } else if has("groups") {
            Ok(FileKind::Groups)
        } else if has("scans") {
            Ok(FileKind::Volume)
        } else {
            Err(Error::Format("JSON object of unknown kind".into()))
        };
    }
    let header = trimmed.lines().next().unwrap_or("").trim_end_matches('\r');
    match header {
        "model_id,subject_id,condition_id,n_stimuli,seed,score" => Ok(FileKind::Records),
        "model_id,group_id,treatment,baseline,delta" => Ok(FileKind::Deltas),
        "model_id,benchmark_id,score" => Ok(FileKind::Bench),
        "concept_id,score" => Ok(FileKind::Polarity),
        h if h.starts_with("stimulus_id,") => Ok(FileKind::Matrix),
        _ => Err(Error::Format(format!("unrecognised header {header:?}"))),
    }
}

fn kind_name(kind: FileKind) -> &'static str {
    match kind {
        FileKind::Auto => "auto",
        FileKind::Matrix => "matrix",
        FileKind::Rdm => "rdm",
        FileKind::Manifest => "manifest",
        FileKind::Groups => "groups",
        FileKind::Config => "config",
        FileKind::Volume => "volume",
        FileKind::Records => "records",
        FileKind::Polarity => "polarity",
        FileKind::Bench => "bench",
        FileKind::Deltas => "deltas",
    }
}

fn check_file(path: &Path, kind: FileKind, manifest: Option<&StimulusManifest>) -> Result<(FileKind, String)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let kind = match kind {
        FileKind::Auto => detect(path, &bytes)?,
        k => k,
    };
    let detail = match kind {
        FileKind::Auto => unreachable!("resolved above"),
        FileKind::Matrix => {
            if bytes.starts_with(MAGIC) {
                let m = decode_matrix(&bytes)?;
                if let Some(man) = manifest {
                    RepresentationMatrix::with_missing(man, MatrixSource::Subject { subject_id: "-".into() }, m.clone())?;
                }
                format!("{}x{}, {} non-finite", m.rows(), m.cols(), m.count_non_finite())
            } else {
                let man = manifest
                    .ok_or_else(|| Error::Configuration("checking a CSV matrix needs --manifest".into()))?;
                let reps = import_csv(bytes.as_slice(), man, MatrixSource::Subject { subject_id: "-".into() })?;
                format!("{}x{}", reps.n_stimuli(), reps.dim())
            }
        }
        FileKind::Rdm => {
            let rdm = Rdm::load(path)?;
            if let Some(man) = manifest {
                if rdm.dataset_id() != man.dataset_id() || rdm.n() != man.len() {
                    return Err(Error::Contract(format!(
                        "RDM of {} (n={}) does not match manifest {} (n={})",
                        rdm.dataset_id(),
                        rdm.n(),
                        man.dataset_id(),
                        man.len()
                    )));
                }
            }
            format!("n={}, dataset {}", rdm.n(), rdm.dataset_id())
        }
        FileKind::Manifest => {
            let m = StimulusManifest::load(path)?;
            format!("{} stimuli, dataset {}", m.len(), m.dataset_id())
        }
        FileKind::Groups => format!("{} groups", GroupsFile::load(path)?.len()),
        FileKind::Config => {
            let c = StudyConfig::load(path)?;
            format!("{} models, {} groups", c.models.len(), c.groups.len())
        }
        FileKind::Volume => {
            let v = NeuralVolume::load(path)?;
            if let Some(man) = manifest {
                flatten_volume(&v, man)?;
            }
            format!("subject {}, shape {:?}, {} scans", v.subject_id, v.shape, v.scans.len())
        }
        FileKind::Records => {
            let r = read_records(bytes.as_slice())?;
            format!("{} records", r.len())
        }
        FileKind::Polarity => {
            let t = PolarityTable::read_csv(bytes.as_slice(), 1)?;
            if let Some(man) = manifest {
                t.validate_against(man)?;
            }
            format!("{} concepts", t.entries.len())
        }
        FileKind::Bench => {
            let b = BenchmarkTable::read_csv(bytes.as_slice())?;
            format!("{} rows", b.rows().len())
        }
        FileKind::Deltas => format!("{} deltas", read_deltas(bytes.as_slice())?.len()),
    };
    Ok((kind, detail))
}

fn validate(g: &GlobalOpts, paths: &[PathBuf], kind: FileKind, manifest_path: Option<&Path>) -> Result<()> {
    let manifest = manifest_path.map(StimulusManifest::load).transpose()?;
    let mut table = Table::new(["path", "kind", "status", "detail"]);
    let mut first_err = None;
    for p in paths {
        match check_file(p, kind, manifest.as_ref()) {
            Ok((k, detail)) => table.push(vec![p.display().to_string(), kind_name(k).into(), "ok".into(), detail]),
            Err(e) => {
                table.push(vec![p.display().to_string(), kind_name(kind).into(), "invalid".into(), e.to_string()]);
                first_err.get_or_insert(e.context(p.display()));
            }
        }
    }
    print_stdout(&table.render(g.format))?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
