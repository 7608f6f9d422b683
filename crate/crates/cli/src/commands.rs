use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};

use factorkit::fset::fill_in_plain;
use factorkit::oracle::{check_lift, solve_square};
use factorkit::{
    frel, fstoch, morphism::typed_square, Error, FinFunction, LiftingSquare, Morphism, Process,
    Relation, SquareDoc, StochMatrix, Theory,
};

use crate::args::{Cli, Mode, Verb};
use crate::render;
use crate::verify;

pub enum Failure {
    /// The request was understood but the theory rejects it.
    Domain(String),
    /// The input could not be read or parsed.
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_malformed_input() {
            Failure::Malformed(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

pub struct Output {
    pub doc: Value,
    pub table: String,
    /// False when a verification suite recorded failures.
    pub ok: bool,
}

impl Output {
    fn new(doc: Value, table: String) -> Self {
        Output {
            doc,
            table,
            ok: true,
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, Failure> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::Malformed(format!(
            "--tol must be a nonnegative number, got {tol}"
        )));
    }
    match cli.verb {
        Verb::Classify { theory, input } => classify(theory.value, &input, tol),
        Verb::Factor {
            theory,
            mode,
            input,
        } => factor(theory.value, mode, &input, tol),
        Verb::Lift {
            theory,
            square,
            left,
            right,
        } => match (square, left, right) {
            (Some(square), _, _) => lift_square(theory.value, &square),
            (None, Some(left), Some(right)) => lift_pair(theory.value, &left, &right),
            _ => Err(Failure::Malformed(
                "lift needs a square or both --left and --right".into(),
            )),
        },
        Verb::Verify {
            theory,
            suite,
            bounds,
        } => verify::run(theory.value, suite, bounds.max_size, bounds.seed, tol),
        Verb::CompareDefinitions { theory, max_size } => {
            compare_definitions(theory.value, max_size)
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn check_theory(expected: Theory, found: Theory) -> Result<(), Failure> {
    if expected == found {
        Ok(())
    } else {
        Err(Failure::Malformed(format!(
            "document is a {found} morphism but --theory is {expected}"
        )))
    }
}

fn read_morphism(theory: Theory, path: &Path) -> Result<Morphism, Failure> {
    let m = Morphism::from_json(&read_input(path)?)?;
    check_theory(theory, m.theory())?;
    Ok(m)
}

fn doc(m: &Morphism) -> Value {
    serde_json::to_value(m.to_doc()).expect("documents serialise")
}

fn square_doc(sq: &LiftingSquare<Morphism>) -> Value {
    serde_json::to_value(SquareDoc::from_square(sq)).expect("documents serialise")
}

fn classify(theory: Theory, input: &Path, tol: f64) -> Result<Output, Failure> {
    let m = read_morphism(theory, input)?;
    let flags = m.classify(tol)?;
    Ok(Output::new(
        serde_json::to_value(flags).expect("flags serialise"),
        render::flags(&flags),
    ))
}

fn factor(theory: Theory, mode: Mode, input: &Path, tol: f64) -> Result<Output, Failure> {
    let m = read_morphism(theory, input)?;
    let (name, pair) = match mode {
        Mode::Purify => ("purify", m.purify(tol)?),
        Mode::Copurify => ("copurify", m.copurify(tol)?),
    };
    let table = format!(
        "ancilla {}\n\nleft: {}\nright: {}",
        pair.ancilla.get(),
        render::morphism(&pair.left),
        render::morphism(&pair.right)
    );
    Ok(Output::new(
        json!({
            "mode": name,
            "theory": theory,
            "ancilla": pair.ancilla.get(),
            "left": doc(&pair.left),
            "right": doc(&pair.right),
        }),
        table,
    ))
}

/// The theory's own construction when the legs are in its classes,
/// otherwise exhaustive search.
fn lift_square(theory: Theory, input: &Path) -> Result<Output, Failure> {
    let sd: SquareDoc = serde_json::from_str(&read_input(input)?)
        .map_err(|e| Failure::Malformed(format!("square document: {e}")))?;
    let sq = sd.to_square().map_err(|e| match e {
        Error::TheoryMismatch { .. } => Failure::Malformed(e.to_string()),
        e => e.into(),
    })?;
    check_theory(theory, sq.left.theory())?;

    let constructed = |h: Morphism| Ok::<_, Error>(("construction", Some(h), None));
    let (method, fill_in, witness) = match theory {
        Theory::FStoch => {
            let sq = typed_square::<StochMatrix>(sq)?;
            constructed(fstoch::fill_in(&sq)?.into())?
        }
        Theory::FRel => {
            let sq = typed_square::<Relation>(sq)?;
            if sq.left.is_mixing() && sq.right.is_pure() {
                constructed(frel::fill_in(&sq)?.into())?
            } else {
                let v = solve_square(&sq)?.map(Morphism::FRel);
                ("search", v.fill_in, v.witness_square)
            }
        }
        Theory::FSet => {
            let sq = typed_square::<FinFunction>(sq)?;
            if sq.left.is_injective() && sq.right.is_surjective() {
                constructed(fill_in_plain(&sq)?.into())?
            } else {
                let v = solve_square(&sq)?.map(Morphism::FSet);
                ("search", v.fill_in, v.witness_square)
            }
        }
        Theory::Quant => {
            return Err(Error::Unsupported {
                theory,
                what: "fill-ins of lifting squares".into(),
            }
            .into())
        }
    };
    let table = match &fill_in {
        Some(h) => format!("fill-in found by {method}\n{}", render::morphism(h)),
        None => "no fill-in exists\n".to_string(),
    };
    Ok(Output::new(
        json!({
            "theory": theory,
            "found": fill_in.is_some(),
            "method": method,
            "fill_in": fill_in.as_ref().map(doc),
            "witness": witness.as_ref().map(square_doc),
        }),
        table,
    ))
}

fn lift_pair(theory: Theory, left: &Path, right: &Path) -> Result<Output, Failure> {
    let (f, g) = (read_morphism(theory, left)?, read_morphism(theory, right)?);
    let verdict = match theory {
        Theory::FRel => {
            check_lift(&Relation::try_from(f)?, &Relation::try_from(g)?)?.map(Morphism::FRel)
        }
        Theory::FSet => {
            check_lift(&FinFunction::try_from(f)?, &FinFunction::try_from(g)?)?.map(Morphism::FSet)
        }
        _ => {
            return Err(Error::Unsupported {
                theory,
                what: "exhaustive lifting search (hom-sets are not finite)".into(),
            }
            .into())
        }
    };
    let table = match &verdict.witness_square {
        None => "left ⋔ right: every commuting square has a fill-in\n".to_string(),
        Some(w) => format!(
            "left ⋔ right fails; square without a fill-in:\ntop: {}bottom: {}",
            render::morphism(&w.top),
            render::morphism(&w.bottom)
        ),
    };
    Ok(Output::new(
        json!({
            "theory": theory,
            "holds": verdict.holds,
            "witness": verdict.witness_square.as_ref().map(square_doc),
        }),
        table,
    ))
}

/// Above this size the table has hundreds of thousands of rows.
const COMPARE_MAX: usize = 4;

fn compare_definitions(theory: Theory, max_size: usize) -> Result<Output, Failure> {
    if theory != Theory::FRel {
        return Err(Error::Unsupported {
            theory,
            what: "rival purity definitions (only frel is tabulated)".into(),
        }
        .into());
    }
    if max_size > COMPARE_MAX {
        return Err(Error::SizeGuard(format!(
            "compare-definitions is limited to --max-size {COMPARE_MAX}"
        ))
        .into());
    }
    let mut rows = Vec::new();
    let mut text = vec![vec![
        "dom".into(),
        "cod".into(),
        "pairs".into(),
        "chiribella".into(),
        "selby_coecke".into(),
        "pure".into(),
        "copure".into(),
    ]];
    let mut counts = [0usize; 4];
    let mut nested = true;
    let mut sc_is_p_and_c = true;
    for r in frel::all_relations_up_to(max_size) {
        let flags = [
            r.is_pure_chiribella(),
            r.is_pure_selby_coecke(),
            r.is_pure(),
            r.is_copure(),
        ];
        for (n, &b) in counts.iter_mut().zip(&flags) {
            *n += usize::from(b);
        }
        let [ch, sc, p, c] = flags;
        nested &= (!ch || sc) && (!sc || p);
        sc_is_p_and_c &= sc == (p && c);
        let pairs: Vec<[usize; 2]> = r.pairs().map(|(a, b)| [a, b]).collect();
        let shown: Vec<String> = pairs.iter().map(|[a, b]| format!("{a}→{b}")).collect();
        text.push(vec![
            r.dom().get().to_string(),
            r.cod().get().to_string(),
            format!("{{{}}}", shown.join(",")),
            render::flag(Some(ch)),
            render::flag(Some(sc)),
            render::flag(Some(p)),
            render::flag(Some(c)),
        ]);
        rows.push(json!({
            "dom": r.dom().get(),
            "cod": r.cod().get(),
            "pairs": pairs,
            "chiribella": ch,
            "selby_coecke": sc,
            "pure": p,
            "copure": c,
        }));
    }
    let summary = json!({
        "relations": rows.len(),
        "chiribella": counts[0],
        "selby_coecke": counts[1],
        "pure": counts[2],
        "copure": counts[3],
        "nested": nested,
        "selby_coecke_is_pure_and_copure": sc_is_p_and_c,
    });
    let mut table = render::table(&text);
    table.push_str(&format!(
        "\n{} relations; chiribella {}, selby_coecke {}, pure {}, copure {}\n\
         chiribella ⊆ selby_coecke ⊆ pure: {}\nselby_coecke = pure ∧ copure: {}\n",
        rows.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        render::flag(Some(nested)),
        render::flag(Some(sc_is_p_and_c)),
    ));
    Ok(Output::new(
        json!({ "theory": theory, "max_size": max_size, "rows": rows, "summary": summary }),
        table,
    ))
}

pub(crate) fn morphism_doc(m: &Morphism) -> Value {
    doc(m)
}

pub(crate) fn square_value(sq: &LiftingSquare<Morphism>) -> Value {
    square_doc(sq)
}
