//! JSON network documents: a language-neutral serialization of every network
//! kind the builders produce, versioned by an explicit `"schema": 1` field.
//! Real scalars are plain numbers, complex scalars two-element [re, im]
//! arrays; weight matrices are nested row arrays (row-major). Serialization
//! round-trips every finite double bit-exactly and refuses non-finite
//! values.

use crate::activation::{Activation, ActivationKind};
use crate::deep::{DenseNet, Mlp, ResBlock, ResNet};
use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar};
use crate::harmonic::{HarmonicNet, HarmonicSigma, HarmonicTerm, OrthProjection};
use crate::linalg::Mat;
use crate::poly::{MPoly, MultiIndex};
use crate::shallow::{Neuron, ShallowNet};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Any serializable network, tagged by kind.
#[derive(Debug, Clone)]
pub enum NetworkDocument {
    Shallow(ShallowNet),
    Resnet(ResNet),
    Mlp(Mlp),
    Densenet(DenseNet),
    Harmonic(HarmonicNet),
}

fn num(v: f64) -> Result<Value> {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .ok_or(Error::NonFinite("serialized number"))
}

fn num_from(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::parse(format!("expected a number for {what}, got {v}")))
}

fn scalar_to_value(field: FieldTag, s: Scalar) -> Result<Value> {
    match field {
        FieldTag::Real => num(s.re),
        FieldTag::Complex => Ok(Value::Array(vec![num(s.re)?, num(s.im)?])),
    }
}

fn scalar_from_value(field: FieldTag, v: &Value, what: &str) -> Result<Scalar> {
    match field {
        FieldTag::Real => Ok(re(num_from(v, what)?)),
        FieldTag::Complex => {
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::parse(format!("expected [re, im] for {what}, got {v}")))?;
            Ok(Scalar::new(num_from(&pair[0], what)?, num_from(&pair[1], what)?))
        }
    }
}

fn scalars_to_value(field: FieldTag, row: &[Scalar]) -> Result<Value> {
    Ok(Value::Array(row.iter().map(|&s| scalar_to_value(field, s)).collect::<Result<_>>()?))
}

fn scalars_from_value(field: FieldTag, v: &Value, what: &str) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| Error::parse(format!("expected an array for {what}, got {v}")))?
        .iter()
        .map(|item| scalar_from_value(field, item, what))
        .collect()
}

fn mat_to_value(field: FieldTag, m: &Mat) -> Result<Value> {
    Ok(Value::Array(
        (0..m.rows()).map(|i| scalars_to_value(field, m.row(i))).collect::<Result<_>>()?,
    ))
}

fn mat_from_value(field: FieldTag, v: &Value, what: &str) -> Result<Mat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse(format!("expected row arrays for {what}, got {v}")))?
        .iter()
        .map(|row| scalars_from_value(field, row, what))
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows)
}

fn reals_to_value(row: &[f64]) -> Result<Value> {
    Ok(Value::Array(row.iter().map(|&v| num(v)).collect::<Result<_>>()?))
}

fn reals_from_value(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| Error::parse(format!("expected an array for {what}, got {v}")))?
        .iter()
        .map(|item| num_from(item, what))
        .collect()
}

fn field_to_value(field: FieldTag) -> Value {
    Value::String(match field {
        FieldTag::Real => "R".to_string(),
        FieldTag::Complex => "C".to_string(),
    })
}

fn field_from_value(v: &Value) -> Result<FieldTag> {
    match v.as_str() {
        Some("R") => Ok(FieldTag::Real),
        Some("C") => Ok(FieldTag::Complex),
        _ => Err(Error::parse(format!("expected field tag \"R\" or \"C\", got {v}"))),
    }
}

fn activation_to_value(act: &Activation) -> Result<Value> {
    Ok(match act.kind() {
        ActivationKind::Exp => json!({"type": "exp"}),
        ActivationKind::Sin => json!({"type": "sin"}),
        ActivationKind::Cos => json!({"type": "cos"}),
        ActivationKind::Sinh => json!({"type": "sinh"}),
        ActivationKind::Cosh => json!({"type": "cosh"}),
        ActivationKind::Relu => json!({"type": "relu"}),
        ActivationKind::LeakyRelu(slope) => {
            json!({"type": "leaky-relu", "slope": num(*slope)?})
        }
        ActivationKind::Polynomial(coeffs) => {
            json!({"type": "polynomial", "coefficients": scalars_to_value(act.field(), coeffs)?})
        }
    })
}

fn activation_from_value(v: &Value, field: FieldTag) -> Result<Activation> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(format!("expected an activation object, got {v}")))?;
    let kind = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse("activation needs a \"type\" string"))?;
    match kind {
        "exp" => Ok(Activation::exp(field)),
        "sin" => Ok(Activation::sin(field)),
        "cos" => Ok(Activation::cos(field)),
        "sinh" => Ok(Activation::sinh(field)),
        "cosh" => Ok(Activation::cosh(field)),
        "relu" => {
            if field != FieldTag::Real {
                return Err(Error::parse("relu activation is real-only"));
            }
            Ok(Activation::relu())
        }
        "leaky-relu" => {
            if field != FieldTag::Real {
                return Err(Error::parse("leaky-relu activation is real-only"));
            }
            let slope = num_from(
                obj.get("slope").ok_or_else(|| Error::parse("leaky-relu needs a slope"))?,
                "leaky-relu slope",
            )?;
            Activation::leaky_relu(slope)
        }
        "polynomial" => {
            let coeffs = scalars_from_value(
                field,
                obj.get("coefficients")
                    .ok_or_else(|| Error::parse("polynomial activation needs coefficients"))?,
                "polynomial coefficient",
            )?;
            Activation::polynomial(coeffs, field)
        }
        other => Err(Error::parse(format!("unknown activation type {other:?}"))),
    }
}

fn mpoly_to_value(p: &MPoly) -> Result<Value> {
    let terms: Vec<Value> = p
        .terms_graded()
        .into_iter()
        .map(|(e, c)| {
            Ok(json!({
                "exponents": e.0,
                "coefficient": scalar_to_value(p.field(), c)?,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({"dim": p.dim(), "field": field_to_value(p.field()), "terms": terms}))
}

fn mpoly_from_value(v: &Value) -> Result<MPoly> {
    let obj =
        v.as_object().ok_or_else(|| Error::parse(format!("expected a polynomial, got {v}")))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse("polynomial needs a \"dim\" integer"))? as usize;
    let field = field_from_value(
        obj.get("field").ok_or_else(|| Error::parse("polynomial needs a field tag"))?,
    )?;
    let mut p = MPoly::zero(dim, field);
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("polynomial needs a \"terms\" array"))?;
    for t in terms {
        let exps: Vec<u32> = t
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("term needs \"exponents\""))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| Error::parse("exponents must be small non-negative integers"))
            })
            .collect::<Result<_>>()?;
        let coeff = scalar_from_value(
            field,
            t.get("coefficient").ok_or_else(|| Error::parse("term needs a coefficient"))?,
            "polynomial coefficient",
        )?;
        p.add_term(MultiIndex(exps), coeff)?;
    }
    Ok(p)
}

fn sigma_to_value(sigma: &HarmonicSigma) -> Result<Value> {
    match sigma {
        HarmonicSigma::Poly(p) => Ok(json!({"type": "mpoly", "poly": mpoly_to_value(p)?})),
        HarmonicSigma::ExpCos => Ok(json!({"type": "expcos"})),
        HarmonicSigma::Custom { name, .. } => Err(Error::precondition(format!(
            "inner function {name:?} is a native closure and cannot be serialized"
        ))),
    }
}

fn sigma_from_value(v: &Value) -> Result<HarmonicSigma> {
    let kind = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse("inner function needs a \"type\" string"))?;
    match kind {
        // documents carry data, not certificates: harmonicity of a stored
        // polynomial is the verifier's job, so parsing never rejects one
        "mpoly" => HarmonicSigma::poly_unchecked(mpoly_from_value(
            v.get("poly").ok_or_else(|| Error::parse("mpoly inner function needs a poly"))?,
        )?),
        "expcos" => Ok(HarmonicSigma::exp_cos()),
        other => Err(Error::parse(format!("unknown inner function type {other:?}"))),
    }
}

fn obj_get<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    obj.get(key).ok_or_else(|| Error::parse(format!("document is missing {key:?}")))
}

impl NetworkDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            NetworkDocument::Shallow(_) => "shallow",
            NetworkDocument::Resnet(_) => "resnet",
            NetworkDocument::Mlp(_) => "mlp",
            NetworkDocument::Densenet(_) => "densenet",
            NetworkDocument::Harmonic(_) => "harmonic",
        }
    }

    pub fn field(&self) -> FieldTag {
        match self {
            NetworkDocument::Shallow(n) => n.field(),
            NetworkDocument::Resnet(n) => n.field(),
            NetworkDocument::Mlp(n) => n.field(),
            NetworkDocument::Densenet(n) => n.field(),
            NetworkDocument::Harmonic(_) => FieldTag::Real,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            NetworkDocument::Shallow(n) => n.dim(),
            NetworkDocument::Resnet(n) => n.dim(),
            NetworkDocument::Mlp(n) => n.dim(),
            NetworkDocument::Densenet(n) => n.dim(),
            NetworkDocument::Harmonic(n) => n.dim(),
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            NetworkDocument::Shallow(n) => n.param_count(),
            NetworkDocument::Resnet(n) => n.param_count(),
            NetworkDocument::Mlp(n) => n.param_count(),
            NetworkDocument::Densenet(n) => n.param_count(),
            NetworkDocument::Harmonic(n) => n.param_count(),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        match self {
            NetworkDocument::Shallow(n) => n.eval(point),
            NetworkDocument::Resnet(n) => n.eval(point),
            NetworkDocument::Mlp(n) => n.eval(point),
            NetworkDocument::Densenet(n) => n.eval(point),
            NetworkDocument::Harmonic(n) => {
                FieldTag::Real.check_all(point, "harmonic network input")?;
                let x: Vec<f64> = point.iter().map(|z| z.re).collect();
                Ok(re(n.eval(&x)?))
            }
        }
    }

    pub fn to_json(&self) -> Result<Value> {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA_VERSION));
        doc.insert("kind".into(), json!(self.kind()));
        match self {
            NetworkDocument::Shallow(n) => {
                let field = n.field();
                doc.insert("field".into(), field_to_value(field));
                doc.insert("dim".into(), json!(n.dim()));
                doc.insert("activation".into(), activation_to_value(n.activation())?);
                let neurons: Vec<Value> = n
                    .neurons()
                    .iter()
                    .map(|neuron| {
                        Ok(json!({
                            "a": scalar_to_value(field, neuron.a)?,
                            "w": scalars_to_value(field, &neuron.w)?,
                            "b": scalar_to_value(field, neuron.b)?,
                        }))
                    })
                    .collect::<Result<_>>()?;
                doc.insert("neurons".into(), Value::Array(neurons));
            }
            NetworkDocument::Resnet(n) => {
                let field = n.field();
                doc.insert("field".into(), field_to_value(field));
                doc.insert("dim".into(), json!(n.dim()));
                doc.insert("state_dim".into(), json!(n.state_dim()));
                doc.insert("activation".into(), activation_to_value(n.activation())?);
                let (entry, entry_bias) = n.entry();
                doc.insert("entry".into(), mat_to_value(field, entry)?);
                doc.insert("entry_bias".into(), scalars_to_value(field, entry_bias)?);
                let blocks: Vec<Value> = n
                    .blocks()
                    .iter()
                    .map(|b| {
                        Ok(json!({
                            "outer": mat_to_value(field, &b.outer)?,
                            "inner": mat_to_value(field, &b.inner)?,
                            "bias": scalars_to_value(field, &b.bias)?,
                        }))
                    })
                    .collect::<Result<_>>()?;
                doc.insert("blocks".into(), Value::Array(blocks));
                doc.insert("exit".into(), scalars_to_value(field, n.exit())?);
            }
            NetworkDocument::Mlp(n) => {
                let field = n.field();
                doc.insert("field".into(), field_to_value(field));
                doc.insert("dim".into(), json!(n.dim()));
                doc.insert("activation".into(), activation_to_value(n.activation())?);
                doc.insert("layers".into(), layers_to_value(field, n.layers())?);
            }
            NetworkDocument::Densenet(n) => {
                let field = n.field();
                doc.insert("field".into(), field_to_value(field));
                doc.insert("dim".into(), json!(n.dim()));
                doc.insert("activation".into(), activation_to_value(n.activation())?);
                doc.insert("layers".into(), layers_to_value(field, n.layers())?);
            }
            NetworkDocument::Harmonic(n) => {
                doc.insert("field".into(), field_to_value(FieldTag::Real));
                doc.insert("dim".into(), json!(n.dim()));
                doc.insert("sigma".into(), sigma_to_value(n.sigma())?);
                let terms: Vec<Value> = n
                    .terms()
                    .iter()
                    .map(|t| {
                        Ok(json!({
                            "amplitude": num(t.amplitude)?,
                            "rho": num(t.rho)?,
                            "projection": Value::Array(
                                t.proj
                                    .rows()
                                    .iter()
                                    .map(|row| reals_to_value(row))
                                    .collect::<Result<_>>()?,
                            ),
                            "bias": reals_to_value(&t.bias)?,
                        }))
                    })
                    .collect::<Result<_>>()?;
                doc.insert("terms".into(), Value::Array(terms));
            }
        }
        Ok(Value::Object(doc))
    }

    /// Pretty JSON text ending in a newline.
    pub fn to_json_string(&self) -> Result<String> {
        let value = self.to_json()?;
        let mut text = serde_json::to_string_pretty(&value)
            .map_err(|e| Error::parse(format!("serialization failed: {e}")))?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse("a network document must be a JSON object"))?;
        let schema = obj_get(obj, "schema")?.as_u64();
        if schema != Some(SCHEMA_VERSION) {
            return Err(Error::parse(format!(
                "unsupported schema version {:?}; this build reads schema {SCHEMA_VERSION}",
                obj_get(obj, "schema")?
            )));
        }
        let kind = obj_get(obj, "kind")?
            .as_str()
            .ok_or_else(|| Error::parse("\"kind\" must be a string"))?;
        let dim = obj_get(obj, "dim")?
            .as_u64()
            .ok_or_else(|| Error::parse("\"dim\" must be a non-negative integer"))?
            as usize;
        let field = field_from_value(obj_get(obj, "field")?)?;
        match kind {
            "shallow" => {
                let activation = activation_from_value(obj_get(obj, "activation")?, field)?;
                let neurons = obj_get(obj, "neurons")?
                    .as_array()
                    .ok_or_else(|| Error::parse("\"neurons\" must be an array"))?
                    .iter()
                    .map(|nv| {
                        let o = nv
                            .as_object()
                            .ok_or_else(|| Error::parse("each neuron must be an object"))?;
                        Ok(Neuron {
                            a: scalar_from_value(field, obj_get(o, "a")?, "neuron a")?,
                            w: scalars_from_value(field, obj_get(o, "w")?, "neuron w")?,
                            b: scalar_from_value(field, obj_get(o, "b")?, "neuron b")?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(NetworkDocument::Shallow(ShallowNet::new(field, dim, activation, neurons)?))
            }
            "resnet" => {
                let activation = activation_from_value(obj_get(obj, "activation")?, field)?;
                let entry = mat_from_value(field, obj_get(obj, "entry")?, "entry matrix")?;
                let entry_bias =
                    scalars_from_value(field, obj_get(obj, "entry_bias")?, "entry bias")?;
                let blocks = obj_get(obj, "blocks")?
                    .as_array()
                    .ok_or_else(|| Error::parse("\"blocks\" must be an array"))?
                    .iter()
                    .map(|bv| {
                        let o = bv
                            .as_object()
                            .ok_or_else(|| Error::parse("each block must be an object"))?;
                        Ok(ResBlock {
                            outer: mat_from_value(field, obj_get(o, "outer")?, "block outer")?,
                            inner: mat_from_value(field, obj_get(o, "inner")?, "block inner")?,
                            bias: scalars_from_value(field, obj_get(o, "bias")?, "block bias")?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let exit = scalars_from_value(field, obj_get(obj, "exit")?, "exit row")?;
                Ok(NetworkDocument::Resnet(ResNet::new(
                    field, dim, entry, entry_bias, blocks, exit, activation,
                )?))
            }
            "mlp" => {
                let activation = activation_from_value(obj_get(obj, "activation")?, field)?;
                let layers = layers_from_value(field, obj_get(obj, "layers")?)?;
                Ok(NetworkDocument::Mlp(Mlp::new(field, dim, layers, activation)?))
            }
            "densenet" => {
                let activation = activation_from_value(obj_get(obj, "activation")?, field)?;
                let layers = layers_from_value(field, obj_get(obj, "layers")?)?;
                Ok(NetworkDocument::Densenet(DenseNet::new(field, dim, layers, activation)?))
            }
            "harmonic" => {
                if field != FieldTag::Real {
                    return Err(Error::parse("harmonic documents are real-only"));
                }
                let sigma = sigma_from_value(obj_get(obj, "sigma")?)?;
                let terms = obj_get(obj, "terms")?
                    .as_array()
                    .ok_or_else(|| Error::parse("\"terms\" must be an array"))?
                    .iter()
                    .map(|tv| {
                        let o = tv
                            .as_object()
                            .ok_or_else(|| Error::parse("each term must be an object"))?;
                        let rows = obj_get(o, "projection")?
                            .as_array()
                            .ok_or_else(|| Error::parse("projection must be a row array"))?
                            .iter()
                            .map(|row| reals_from_value(row, "projection row"))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(HarmonicTerm {
                            amplitude: num_from(obj_get(o, "amplitude")?, "amplitude")?,
                            rho: num_from(obj_get(o, "rho")?, "rho")?,
                            proj: OrthProjection::new(rows)?,
                            bias: reals_from_value(obj_get(o, "bias")?, "term bias")?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(NetworkDocument::Harmonic(HarmonicNet::new(dim, sigma, terms)?))
            }
            other => Err(Error::parse(format!("unknown network kind {other:?}"))),
        }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("invalid JSON: {e}")))?;
        Self::from_json(&value)
    }
}

fn layers_to_value(field: FieldTag, layers: &[(Mat, Vec<Scalar>)]) -> Result<Value> {
    Ok(Value::Array(
        layers
            .iter()
            .map(|(w, b)| {
                Ok(json!({
                    "weights": mat_to_value(field, w)?,
                    "bias": scalars_to_value(field, b)?,
                }))
            })
            .collect::<Result<_>>()?,
    ))
}

fn layers_from_value(field: FieldTag, v: &Value) -> Result<Vec<(Mat, Vec<Scalar>)>> {
    v.as_array()
        .ok_or_else(|| Error::parse("\"layers\" must be an array"))?
        .iter()
        .map(|lv| {
            let o = lv.as_object().ok_or_else(|| Error::parse("each layer must be an object"))?;
            Ok((
                mat_from_value(field, obj_get(o, "weights")?, "layer weights")?,
                scalars_from_value(field, obj_get(o, "bias")?, "layer bias")?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deep::{densenet_from_shallow, mlp_from_shallow, resnet_from_shallow};
    use crate::harmonic::random_harmonic_net;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_shallow(seed: u64, field: FieldTag, dim: usize, n: usize) -> ShallowNet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |r: &mut ChaCha8Rng| match field {
            FieldTag::Real => re(r.gen_range(-1.0..1.0)),
            FieldTag::Complex => Scalar::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)),
        };
        let neurons = (0..n)
            .map(|_| Neuron {
                a: draw(&mut rng),
                w: (0..dim).map(|_| draw(&mut rng)).collect(),
                b: draw(&mut rng),
            })
            .collect();
        ShallowNet::new(field, dim, Activation::exp(field), neurons).unwrap()
    }

    fn assert_bit_exact_round_trip(doc: &NetworkDocument) {
        let text = doc.to_json_string().unwrap();
        let back = NetworkDocument::parse_str(&text).unwrap();
        let text2 = back.to_json_string().unwrap();
        assert_eq!(text, text2, "serialized forms differ after one round trip");
        // spot-check behavior agreement at a few points
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let z: Vec<Scalar> = (0..doc.dim())
                .map(|_| match doc.field() {
                    FieldTag::Real => re(rng.gen_range(-1.0..1.0)),
                    FieldTag::Complex => {
                        Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    }
                })
                .collect();
            let a = doc.eval(&z).unwrap();
            let b = back.eval(&z).unwrap();
            assert_eq!(a, b, "evaluations differ at {z:?}");
        }
    }

    #[test]
    fn shallow_documents_round_trip_both_fields() {
        for field in [FieldTag::Real, FieldTag::Complex] {
            let net = random_shallow(3, field, 2, 4);
            assert_bit_exact_round_trip(&NetworkDocument::Shallow(net));
        }
    }

    #[test]
    fn deep_documents_round_trip() {
        let source = random_shallow(5, FieldTag::Complex, 2, 4);
        let resnet = resnet_from_shallow(&source, &[2, 2]).unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Resnet(resnet));
        let mlp = mlp_from_shallow(&source, &[2, 2], 1e-3, None).unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Mlp(mlp));
        let dense = densenet_from_shallow(&source).unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Densenet(dense));
    }

    #[test]
    fn relu_and_polynomial_activations_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let neurons: Vec<Neuron> = (0..3)
            .map(|_| Neuron {
                a: re(rng.gen_range(-1.0..1.0)),
                w: vec![re(rng.gen_range(-1.0..1.0))],
                b: re(rng.gen_range(-1.0..1.0)),
            })
            .collect();
        let relu_net =
            ShallowNet::new(FieldTag::Real, 1, Activation::relu(), neurons.clone()).unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Shallow(relu_net));
        let leaky =
            ShallowNet::new(FieldTag::Real, 1, Activation::leaky_relu(0.1).unwrap(), neurons)
                .unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Shallow(leaky));
        let poly_act = Activation::polynomial(
            vec![Scalar::new(0.5, -1.0), Scalar::new(0.0, 0.0), Scalar::new(2.0, 0.25)],
            FieldTag::Complex,
        )
        .unwrap();
        let net = ShallowNet::new(
            FieldTag::Complex,
            1,
            poly_act,
            vec![Neuron { a: re(1.0), w: vec![Scalar::new(0.0, 1.0)], b: re(0.0) }],
        )
        .unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Shallow(net));
    }

    #[test]
    fn harmonic_documents_round_trip() {
        let expcos = random_harmonic_net(4, 3, HarmonicSigma::exp_cos()).unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Harmonic(expcos));
        let p = MPoly::from_terms(
            2,
            FieldTag::Real,
            [(vec![2, 0], re(1.0)), (vec![0, 2], re(-1.0))],
        )
        .unwrap();
        let net = random_harmonic_net(8, 4, HarmonicSigma::poly(p).unwrap()).unwrap();
        assert_bit_exact_round_trip(&NetworkDocument::Harmonic(net));
    }

    #[test]
    fn non_harmonic_sigma_still_parses_for_verification() {
        let p = MPoly::from_terms(2, FieldTag::Real, [(vec![2, 0], re(1.0))]).unwrap();
        let net = random_harmonic_net(2, 3, HarmonicSigma::poly_unchecked(p).unwrap()).unwrap();
        let text = NetworkDocument::Harmonic(net).to_json_string().unwrap();
        let back = NetworkDocument::parse_str(&text).unwrap();
        match back {
            NetworkDocument::Harmonic(h) => {
                assert_eq!(h.sigma().symbolically_harmonic(), Some(false));
            }
            _ => panic!("expected a harmonic document"),
        }
    }

    #[test]
    fn custom_sigma_cannot_serialize() {
        let sigma = HarmonicSigma::custom("native", 2, |u| u[0] + u[1]);
        let net = random_harmonic_net(6, 3, sigma).unwrap();
        let err = NetworkDocument::Harmonic(net).to_json_string().unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn parse_rejects_malformed_documents() {
        assert_eq!(NetworkDocument::parse_str("{not json").unwrap_err().exit_code(), 2);
        assert_eq!(NetworkDocument::parse_str("[1,2]").unwrap_err().exit_code(), 2);
        let missing_schema = r#"{"kind":"shallow","field":"R","dim":1}"#;
        assert!(NetworkDocument::parse_str(missing_schema).is_err());
        let bad_schema =
            r#"{"schema":2,"kind":"shallow","field":"R","dim":1,"neurons":[]}"#;
        let err = NetworkDocument::parse_str(bad_schema).unwrap_err();
        assert!(format!("{err}").contains("schema"));
        let bad_kind = r#"{"schema":1,"kind":"cnn","field":"R","dim":1}"#;
        assert!(NetworkDocument::parse_str(bad_kind).is_err());
        let bad_field = r#"{"schema":1,"kind":"shallow","field":"Q","dim":1,"neurons":[]}"#;
        assert!(NetworkDocument::parse_str(bad_field).is_err());
        // complex scalar where the document claims a real field
        let mixed = r#"{"schema":1,"kind":"shallow","field":"R","dim":1,
            "activation":{"type":"exp"},
            "neurons":[{"a":[1.0,2.0],"w":[0.5],"b":0.0}]}"#;
        assert_eq!(NetworkDocument::parse_str(mixed).unwrap_err().exit_code(), 2);
        // relu under the complex tag is refused at parse time
        let complex_relu = r#"{"schema":1,"kind":"shallow","field":"C","dim":1,
            "activation":{"type":"relu"},"neurons":[]}"#;
        assert!(NetworkDocument::parse_str(complex_relu).is_err());
    }

    #[test]
    fn documents_expose_counts_for_reports() {
        let net = random_shallow(11, FieldTag::Real, 2, 5);
        let doc = NetworkDocument::Shallow(net);
        assert_eq!(doc.kind(), "shallow");
        assert_eq!(doc.param_count(), 20);
        assert_eq!(doc.dim(), 2);
        let harmonic = NetworkDocument::Harmonic(
            random_harmonic_net(3, 3, HarmonicSigma::exp_cos()).unwrap(),
        );
        // each term stores amplitude, scale, a 2x3 projection, and 2 biases
        assert_eq!(harmonic.param_count() % 10, 0);
        let err = harmonic.eval(&[Scalar::new(0.0, 1.0), re(0.0), re(0.0)]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
