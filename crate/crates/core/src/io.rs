//! JSON input formats. Vertices, layers and cells are 1-based in files;
//! rationals are written `"p/q"`. Every error names the offending path.

use serde_json::{Map, Value};

use crate::combinatorics::{Exponent, WordSpec};
use crate::cumulants::ScalarLaw;
use crate::error::{Error, Result};
use crate::finite_n::{BaseFamily, GridFamily};
use crate::graphon::StepGraphon;
use crate::graphs::{lexicographic_product, GridGraph, GridVertex, SimpleGraph};
use crate::limit_laws::LimitModel;
use crate::scalar::Scalar;
use crate::subset::{Subset, MAX_LAYERS};

fn err(path: &str, msg: impl Into<String>) -> Error {
    Error::schema(path, msg)
}

fn child(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn item(path: &str, idx: usize) -> String {
    format!("{path}[{idx}]")
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| err(&child(path, key), "missing field"))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(
            &child(path, k),
            format!("unknown field (expected one of {})", allowed.join(", ")),
        )),
        None => Ok(()),
    }
}

/// Positive integer.
pub fn parse_count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .filter(|&x| x > 0)
        .map(|x| x as usize)
        .ok_or_else(|| err(path, "expected a positive integer"))
}

/// A 1-based index in `1..=max`, returned 0-based.
fn parse_index(v: &Value, path: &str, max: usize, what: &str) -> Result<usize> {
    match v.as_u64() {
        Some(x) if x >= 1 && x as usize <= max => Ok(x as usize - 1),
        _ => Err(err(path, format!("expected a {what} between 1 and {max}"))),
    }
}

/// Integer, `"p/q"` string, decimal string, or (float mode only) a float.
pub fn parse_scalar<T: Scalar>(v: &Value, path: &str) -> Result<T> {
    match v {
        Value::String(s) => {
            T::parse_str(s).ok_or_else(|| err(path, format!("cannot read {s:?} as a number")))
        }
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(T::from_i64(i))
            } else {
                let f = num
                    .as_f64()
                    .ok_or_else(|| err(path, "number out of range"))?;
                T::from_json_f64(f).ok_or_else(|| {
                    err(
                        path,
                        format!(
                            "float {f} is not accepted in exact mode; write it as a \"p/q\" string"
                        ),
                    )
                })
            }
        }
        _ => Err(err(path, "expected a number or a \"p/q\" string")),
    }
}

fn parse_scalars<T: Scalar>(v: &Value, path: &str) -> Result<Vec<T>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_scalar(x, &item(path, i)))
        .collect()
}

/// `{"n": 3, "edges": [[1, 2], [2, 3]]}` or `{"family": "complete" | "edgeless" | "path", "n": 3}`.
pub fn parse_graph(v: &Value, path: &str) -> Result<SimpleGraph> {
    let obj = object(v, path)?;
    reject_unknown(obj, path, &["n", "edges", "family"])?;
    let n = parse_count(field(obj, path, "n")?, &child(path, "n"))?;
    if let Some(family) = obj.get("family") {
        let fpath = child(path, "family");
        if obj.contains_key("edges") {
            return Err(err(
                &child(path, "edges"),
                "edges cannot be combined with a family",
            ));
        }
        return match family.as_str() {
            Some("complete") => Ok(SimpleGraph::complete(n)),
            Some("edgeless") => Ok(SimpleGraph::edgeless(n)),
            Some("path") => Ok(SimpleGraph::path(n)),
            _ => Err(err(
                &fpath,
                "expected \"complete\", \"edgeless\" or \"path\"",
            )),
        };
    }
    let epath = child(path, "edges");
    let mut g = SimpleGraph::edgeless(n);
    if let Some(edges) = obj.get("edges") {
        for (idx, e) in array(edges, &epath)?.iter().enumerate() {
            let ep = item(&epath, idx);
            let pair = array(e, &ep)?;
            if pair.len() != 2 {
                return Err(err(&ep, "an edge has exactly two endpoints"));
            }
            let u = parse_index(&pair[0], &item(&ep, 0), n, "vertex")?;
            let w = parse_index(&pair[1], &item(&ep, 1), n, "vertex")?;
            g.add_edge(u, w).map_err(|e| err(&ep, e.to_string()))?;
        }
    }
    Ok(g)
}

/// `{"n": 2, "L": 2, "edges": [[[1, 1], [2, 2]]]}` with `[column, layer]`
/// endpoints, or `{"base": graph, "layers": graph}` for a lexicographic
/// product.
pub fn parse_grid(v: &Value, path: &str) -> Result<GridGraph> {
    let obj = object(v, path)?;
    if obj.contains_key("base") {
        reject_unknown(obj, path, &["base", "layers"])?;
        let base = parse_graph(field(obj, path, "base")?, &child(path, "base"))?;
        let layers = parse_graph(field(obj, path, "layers")?, &child(path, "layers"))?;
        check_layer_count(layers.vertex_count(), &child(path, "layers"))?;
        return Ok(lexicographic_product(&base, &layers));
    }
    reject_unknown(obj, path, &["n", "L", "edges"])?;
    let n = parse_count(field(obj, path, "n")?, &child(path, "n"))?;
    let layers = parse_count(field(obj, path, "L")?, &child(path, "L"))?;
    check_layer_count(layers, &child(path, "L"))?;
    let mut g = GridGraph::edgeless(n, layers);
    let epath = child(path, "edges");
    if let Some(edges) = obj.get("edges") {
        for (idx, e) in array(edges, &epath)?.iter().enumerate() {
            let ep = item(&epath, idx);
            let pair = array(e, &ep)?;
            if pair.len() != 2 {
                return Err(err(&ep, "an edge has exactly two endpoints"));
            }
            let mut ends = [GridVertex::new(0, 0); 2];
            for (side, end) in pair.iter().enumerate() {
                let vp = item(&ep, side);
                let kl = array(end, &vp)?;
                if kl.len() != 2 {
                    return Err(err(&vp, "a grid vertex is [column, layer]"));
                }
                ends[side] = GridVertex::new(
                    parse_index(&kl[0], &item(&vp, 0), n, "column")?,
                    parse_index(&kl[1], &item(&vp, 1), layers, "layer")?,
                );
            }
            g.add_edge(ends[0], ends[1])
                .map_err(|e| err(&ep, e.to_string()))?;
        }
    }
    Ok(g)
}

fn check_layer_count(layers: usize, path: &str) -> Result<()> {
    if layers > MAX_LAYERS {
        return Err(err(
            path,
            format!("at most {MAX_LAYERS} layers are supported"),
        ));
    }
    Ok(())
}

/// `{"breaks": ["0", "1/2", "1"], "values": [["1", "0"], ["0", "1"]]}`,
/// `{"constant": "1/3"}` or `{"graph": graph}`.
pub fn parse_graphon<T: Scalar>(v: &Value, path: &str) -> Result<StepGraphon<T>> {
    let obj = object(v, path)?;
    if let Some(q) = obj.get("constant") {
        reject_unknown(obj, path, &["constant"])?;
        let cpath = child(path, "constant");
        return StepGraphon::constant(parse_scalar(q, &cpath)?)
            .map_err(|e| err(&cpath, e.to_string()));
    }
    if let Some(g) = obj.get("graph") {
        reject_unknown(obj, path, &["graph"])?;
        let gpath = child(path, "graph");
        return StepGraphon::from_graph(&parse_graph(g, &gpath)?)
            .map_err(|e| err(&gpath, e.to_string()));
    }
    reject_unknown(obj, path, &["breaks", "values"])?;
    let bpath = child(path, "breaks");
    let breaks = parse_scalars(field(obj, path, "breaks")?, &bpath)?;
    let vpath = child(path, "values");
    let rows = array(field(obj, path, "values")?, &vpath)?
        .iter()
        .enumerate()
        .map(|(i, row)| parse_scalars(row, &item(&vpath, i)))
        .collect::<Result<Vec<Vec<T>>>>()?;
    StepGraphon::new(breaks, rows).map_err(|e| err(path, e.to_string()))
}

/// `{"moments": [m1, m2, ...]}`, `{"lambda": l, "sigma2": s}` (shifted
/// semicircle with moments up to `order`), or `{"standard": "semicircle" |
/// "gaussian" | "rademacher"}`.
pub fn parse_law<T: Scalar>(v: &Value, path: &str, order: usize) -> Result<ScalarLaw<T>> {
    let obj = object(v, path)?;
    let order = match obj.get("order") {
        Some(o) => parse_count(o, &child(path, "order"))?,
        None => order.max(2),
    };
    if let Some(m) = obj.get("moments") {
        reject_unknown(obj, path, &["moments"])?;
        let mpath = child(path, "moments");
        return ScalarLaw::new(parse_scalars(m, &mpath)?).map_err(|e| err(&mpath, e.to_string()));
    }
    if let Some(kind) = obj.get("standard") {
        reject_unknown(obj, path, &["standard", "order"])?;
        return match kind.as_str() {
            Some("semicircle") => Ok(ScalarLaw::semicircle(order)),
            Some("gaussian") => Ok(ScalarLaw::gaussian(order)),
            Some("rademacher") => Ok(ScalarLaw::rademacher(order)),
            _ => Err(err(
                &child(path, "standard"),
                "expected \"semicircle\", \"gaussian\" or \"rademacher\"",
            )),
        };
    }
    reject_unknown(obj, path, &["lambda", "sigma2", "order"])?;
    let lambda = parse_scalar(field(obj, path, "lambda")?, &child(path, "lambda"))?;
    let sigma2 = parse_scalar(field(obj, path, "sigma2")?, &child(path, "sigma2"))?;
    ScalarLaw::shifted_semicircle(lambda, sigma2, order).map_err(|e| err(path, e.to_string()))
}

/// Subset written as a list of 1-based layers.
pub fn parse_subset(v: &Value, path: &str, layers: usize) -> Result<Subset> {
    let items = array(v, path)?;
    let mut out = Vec::with_capacity(items.len());
    for (i, x) in items.iter().enumerate() {
        out.push(parse_index(x, &item(path, i), layers, "layer")?);
    }
    let s = Subset::from_layers(out).map_err(|e| err(path, e.to_string()))?;
    if s.is_empty() {
        return Err(err(path, "subset must be nonempty"));
    }
    Ok(s)
}

/// Exponent word such as `"1*1*"`.
pub fn parse_exponents(s: &str, path: &str) -> Result<Vec<Exponent>> {
    s.chars()
        .map(|c| {
            Exponent::parse(c).ok_or_else(|| err(path, format!("{c:?} is neither '1' nor '*'")))
        })
        .collect()
}

/// `{"J": [[1, 2], [2]], "alpha": "*1"}`; `alpha` defaults to all `1`.
pub fn parse_word(v: &Value, path: &str, layers: usize) -> Result<WordSpec> {
    let obj = object(v, path)?;
    reject_unknown(obj, path, &["J", "alpha"])?;
    let jpath = child(path, "J");
    let js = array(field(obj, path, "J")?, &jpath)?
        .iter()
        .enumerate()
        .map(|(i, j)| parse_subset(j, &item(&jpath, i), layers))
        .collect::<Result<Vec<_>>>()?;
    let alpha = match obj.get("alpha") {
        Some(a) => {
            let apath = child(path, "alpha");
            let s = a
                .as_str()
                .ok_or_else(|| err(&apath, "expected a string of '1' and '*'"))?;
            parse_exponents(s, &apath)?
        }
        None => vec![Exponent::One; js.len()],
    };
    WordSpec::new(js, alpha).map_err(|e| err(path, e.to_string()))
}

/// Everything a model file describes.
#[derive(Clone, Debug)]
pub struct ModelFile<T> {
    pub model: LimitModel<T>,
    pub law: ScalarLaw<T>,
    pub family: GridFamily<T>,
    pub p_max: usize,
    /// Extra words in the `s_J` to report.
    pub words: Vec<WordSpec>,
}

/// Model file:
///
/// ```json
/// {"L": 2, "g_L": {"n": 2, "edges": [[1, 2]]}, "w": {"constant": "0"},
///  "law": {"lambda": "1", "sigma2": "1"}, "p_max": 4,
///  "g_prime": "blow_up", "words": [{"J": [[1, 2], [1, 2]], "alpha": "1*"}]}
/// ```
///
/// `g_prime` is `"complete"`, `"edgeless"`, `"blow_up"` (of `w`, the default)
/// or an explicit graph.
/// `p_max` overrides the value in the file.
pub fn parse_model<T: Scalar>(v: &Value, p_max: Option<usize>) -> Result<ModelFile<T>> {
    let path = "$";
    let obj = object(v, path)?;
    reject_unknown(
        obj,
        path,
        &["L", "g_L", "w", "law", "p_max", "g_prime", "words"],
    )?;
    let layers = parse_count(field(obj, path, "L")?, "$.L")?;
    check_layer_count(layers, "$.L")?;
    let layer_graph = parse_graph(field(obj, path, "g_L")?, "$.g_L")?;
    if layer_graph.vertex_count() != layers {
        return Err(err(
            "$.g_L.n",
            format!("layer graph must have L = {layers} vertices"),
        ));
    }
    let w = parse_graphon(field(obj, path, "w")?, "$.w")?;
    let file_p_max = parse_count(field(obj, path, "p_max")?, "$.p_max")?;
    let p_max = p_max.unwrap_or(file_p_max);
    let law: ScalarLaw<T> = parse_law(field(obj, path, "law")?, "$.law", p_max.max(4))?;
    let model = LimitModel::new(layer_graph.clone(), w.clone(), law.mean(), law.variance())
        .map_err(|e| err("$.law", e.to_string()))?;
    let base = match obj.get("g_prime") {
        None => BaseFamily::BlowUp(w),
        Some(Value::String(s)) => match s.as_str() {
            "complete" => BaseFamily::Complete,
            "edgeless" => BaseFamily::Edgeless,
            "blow_up" => BaseFamily::BlowUp(w),
            _ => {
                return Err(err(
                    "$.g_prime",
                    "expected \"complete\", \"edgeless\", \"blow_up\" or a graph",
                ))
            }
        },
        Some(g) => BaseFamily::Explicit(parse_graph(g, "$.g_prime")?),
    };
    let family = GridFamily::new(base, layer_graph).map_err(|e| err("$.g_prime", e.to_string()))?;
    let words = match obj.get("words") {
        None => Vec::new(),
        Some(ws) => array(ws, "$.words")?
            .iter()
            .enumerate()
            .map(|(i, w)| parse_word(w, &item("$.words", i), layers))
            .collect::<Result<_>>()?,
    };
    Ok(ModelFile {
        model,
        law,
        family,
        p_max,
        words,
    })
}

/// JSON text to a value, with parse errors reported at the root.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| err("$", format!("invalid JSON: {e}")))
}

/// Exact values as `"p/q"` strings, floats as JSON numbers.
pub fn scalar_to_json<T: Scalar>(x: &T) -> Value {
    if T::EXACT {
        Value::String(x.to_string())
    } else {
        serde_json::Number::from_f64(x.to_f64())
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(x.to_string()))
    }
}
