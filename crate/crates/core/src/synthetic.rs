//! Seeded generator for arena-style comparison logs.
//!
//! Prompts are drawn from a handful of themes with disjoint vocabularies, so
//! a working pipeline recovers one topic per theme. A few rows are written in
//! Cyrillic or contain only a URL, to exercise the preprocessing filters.
//! Winners follow a per-theme strength table with a fixed tie rate, and
//! shorter answers get a small edge.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub struct Theme {
    pub name: &'static str,
    pub keywords: &'static [&'static str],
    pub openers: &'static [&'static str],
}

pub const THEMES: &[Theme] = &[
    Theme {
        name: "python_code",
        keywords: &[
            "python",
            "function",
            "list",
            "dictionary",
            "loop",
            "variable",
            "class",
            "module",
            "import",
            "exception",
            "recursion",
            "iterator",
            "decorator",
            "script",
            "pandas",
            "numpy",
            "syntax",
            "debug",
            "compile",
            "array",
        ],
        openers: &[
            "Write a python",
            "Fix this python",
            "Explain the python",
            "How do I debug a python",
        ],
    },
    Theme {
        name: "cooking",
        keywords: &[
            "recipe",
            "chicken",
            "garlic",
            "oven",
            "bake",
            "sauce",
            "pasta",
            "onion",
            "flour",
            "butter",
            "dinner",
            "vegetarian",
            "soup",
            "spices",
            "tomato",
            "cheese",
            "grill",
            "dessert",
            "chocolate",
            "kitchen",
        ],
        openers: &[
            "Give me a recipe",
            "How long should I bake",
            "Suggest a dinner",
            "What can I cook",
        ],
    },
    Theme {
        name: "travel",
        keywords: &[
            "trip",
            "itinerary",
            "flight",
            "hotel",
            "beach",
            "museum",
            "paris",
            "tokyo",
            "visa",
            "luggage",
            "train",
            "passport",
            "vacation",
            "tourist",
            "backpacking",
            "airport",
            "budget",
            "island",
            "mountains",
            "road",
        ],
        openers: &[
            "Plan a trip",
            "Suggest an itinerary",
            "Where should I travel",
            "Help me pack",
        ],
    },
    Theme {
        name: "fitness",
        keywords: &[
            "workout",
            "muscle",
            "cardio",
            "protein",
            "running",
            "squat",
            "stretching",
            "gym",
            "weight",
            "calories",
            "marathon",
            "yoga",
            "strength",
            "routine",
            "sleep",
            "hydration",
            "injury",
            "endurance",
            "diet",
            "training",
        ],
        openers: &[
            "Design a workout",
            "How many calories",
            "Build a training",
            "Is it healthy",
        ],
    },
    Theme {
        name: "finance",
        keywords: &[
            "invest",
            "stocks",
            "bonds",
            "retirement",
            "savings",
            "inflation",
            "mortgage",
            "interest",
            "portfolio",
            "dividend",
            "taxes",
            "crypto",
            "bitcoin",
            "loan",
            "credit",
            "income",
            "expenses",
            "market",
            "fund",
            "bank",
        ],
        openers: &[
            "Should I invest",
            "Explain how interest",
            "Compare these funds",
            "Help me budget",
        ],
    },
    Theme {
        name: "poetry",
        keywords: &[
            "poem",
            "haiku",
            "rhyme",
            "verse",
            "sonnet",
            "stanza",
            "metaphor",
            "moonlight",
            "ocean",
            "autumn",
            "love",
            "lyrics",
            "ballad",
            "limerick",
            "whisper",
            "dream",
            "melody",
            "rose",
            "stars",
            "heart",
        ],
        openers: &[
            "Write a poem",
            "Compose a haiku",
            "Write song lyrics",
            "Create a sonnet",
        ],
    },
];

/// Shared filler that carries no topic signal.
const FILLER: &[&str] = &[
    "please", "about", "with", "for", "the", "and", "that", "some", "good", "simple", "quick", "best", "really",
    "today", "also", "explain", "maybe", "very",
];

pub const MODELS: &[&str] = &[
    "gpt-4",
    "gpt-3.5-turbo",
    "claude-v1",
    "vicuna-13b",
    "palm-2",
    "llama-2-13b-chat",
    "koala-13b",
    "alpaca-13b",
];

/// Base strength per model; themes shift it.
const STRENGTH: &[f64] = &[1.6, 1.2, 1.3, 0.6, 0.7, 0.5, 0.1, -0.2];

/// Every prompt ends with one of these so it reads as English.
const CLOSERS: &[&str] = &["for me", "please", "with examples", "for a friend", "if you can"];

const CYRILLIC: &[&str] = &[
    "Привет, как дела? Расскажи мне о погоде.",
    "Напиши стихотворение о весне и солнце.",
    "Как приготовить борщ дома?",
    "Объясни, что такое машинное обучение.",
];

const URLS: &[&str] = &[
    "https://example.com/some/page",
    "www.example.org/article?id=42",
    "http://docs.example.net/guide",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    /// English records with a theme.
    pub n_records: usize,
    pub n_non_english: usize,
    pub n_url_only: usize,
    pub tie_rate: f64,
    /// Extra log-odds for the shorter answer.
    pub short_bias: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_records: 500,
            n_non_english: 8,
            n_url_only: 4,
            tie_rate: 0.3,
            short_bias: 0.4,
            seed: 20240,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRecord {
    /// Index into [`THEMES`]; `None` for rows meant to be filtered out.
    pub theme: Option<usize>,
    pub json: Value,
}

fn theme_shift(model: usize, theme: usize) -> f64 {
    // deterministic specialisation: each model is strong on one theme
    if model % THEMES.len() == theme {
        0.8
    } else {
        0.0
    }
}

fn sentence(rng: &mut ChaCha8Rng, theme: &Theme) -> String {
    let mut words: Vec<&str> = vec![theme.openers.choose(rng).expect("openers")];
    let n = rng.random_range(6..=10);
    for _ in 0..n {
        if rng.random_bool(0.7) {
            words.push(theme.keywords.choose(rng).expect("keywords"));
        } else {
            words.push(FILLER.choose(rng).expect("filler"));
        }
    }
    words.push(CLOSERS.choose(rng).expect("closers"));
    let mut s = words.join(" ");
    s.push('?');
    s
}

fn answer(rng: &mut ChaCha8Rng, theme: Option<&Theme>, words: usize) -> String {
    let pool: Vec<&str> = match theme {
        Some(t) => t.keywords.iter().chain(FILLER).copied().collect(),
        None => FILLER.to_vec(),
    };
    (0..words)
        .map(|_| *pool.choose(rng).expect("pool"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn conversation(prompt: &str, reply: &str) -> Value {
    json!([
        {"role": "user", "content": prompt},
        {"role": "assistant", "content": reply},
    ])
}

/// Records in generation order; the filtered rows are spread through the
/// file at fixed positions.
pub fn generate(config: &SyntheticConfig) -> Vec<SyntheticRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let total = config.n_records + config.n_non_english + config.n_url_only;
    let mut kinds: Vec<u8> = std::iter::repeat_n(0u8, config.n_records)
        .chain(std::iter::repeat_n(1, config.n_non_english))
        .chain(std::iter::repeat_n(2, config.n_url_only))
        .collect();
    // spread special rows evenly
    if total > 0 {
        let specials: Vec<u8> = kinds.split_off(config.n_records);
        let step = total / (specials.len() + 1);
        for (k, kind) in specials.into_iter().enumerate() {
            let at = ((k + 1) * step).min(kinds.len());
            kinds.insert(at, kind);
        }
    }

    kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| {
            let a = rng.random_range(0..MODELS.len());
            let mut b = rng.random_range(0..MODELS.len() - 1);
            if b >= a {
                b += 1;
            }
            let (theme, prompt, lang) = match kind {
                0 => {
                    let t = i % THEMES.len();
                    (Some(t), sentence(&mut rng, &THEMES[t]), "English")
                }
                1 => (None, CYRILLIC.choose(&mut rng).expect("rows").to_string(), "Russian"),
                _ => (None, URLS.choose(&mut rng).expect("rows").to_string(), "English"),
            };
            let len_a = rng.random_range(8..60);
            let len_b = rng.random_range(8..60);
            let reply_a = answer(&mut rng, theme.map(|t| &THEMES[t]), len_a);
            let reply_b = answer(&mut rng, theme.map(|t| &THEMES[t]), len_b);

            let winner = if rng.random_bool(config.tie_rate) {
                if rng.random_bool(0.5) {
                    "tie"
                } else {
                    "tie (bothbad)"
                }
            } else {
                let t = theme.unwrap_or(0);
                let mut logit = STRENGTH[a] + theme_shift(a, t) - STRENGTH[b] - theme_shift(b, t);
                logit += match len_a.cmp(&len_b) {
                    std::cmp::Ordering::Less => config.short_bias,
                    std::cmp::Ordering::Greater => -config.short_bias,
                    std::cmp::Ordering::Equal => 0.0,
                };
                let p = 1.0 / (1.0 + (-logit).exp());
                if rng.random_bool(p) {
                    "model_a"
                } else {
                    "model_b"
                }
            };
            let json = json!({
                "question_id": format!("syn-{i:04}"),
                "model_a": MODELS[a],
                "model_b": MODELS[b],
                "winner": winner,
                "conversation_a": conversation(&prompt, &reply_a),
                "conversation_b": conversation(&prompt, &reply_b),
                "language": lang,
                "turn": 1,
            });
            SyntheticRecord { theme, json }
        })
        .collect()
}

/// One JSON object per line, keys in a fixed order.
pub fn to_jsonl(records: &[SyntheticRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(&r.json).expect("plain JSON"));
        out.push('\n');
    }
    out
}

/// The bundled demo corpus, as shipped in `data/synthetic_arena.jsonl`.
pub const BUNDLED_CORPUS: &str = include_str!("../data/synthetic_arena.jsonl");
