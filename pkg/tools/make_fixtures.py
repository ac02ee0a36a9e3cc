#!/usr/bin/env python3
"""Generate the deterministic sample data shipped under data/.

The financial phrasebank distribution and the pretrained uncased vocabulary
cannot be redistributed here, so this script fabricates stand-ins with the
same shape: four agreement-level files whose label distributions and counts
match the published summary table exactly, a closed WordPiece vocabulary
covering every generated word, a blank-line-delimited financial news sample,
and a synthetic labeled-sentence file.

Everything is seeded; re-running reproduces byte-identical files.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from finsent.wordpiece import basic_tokenize  # noqa: E402

OUT_DIR = Path(__file__).resolve().parent.parent / "data"

SEED = 20240901

# Per-class record counts (negative, neutral, positive) per agreement file.
# Chosen so that 100 * count / total rounds to the published percentages and
# higher agreement levels are strict subsets.
FILE_COUNTS = {
    "Sentences_AllAgree.txt": (303, 1387, 569),   # 13.4 / 61.4 / 25.2, n=2259
    "Sentences_75Agree.txt": (421, 2141, 886),    # 12.2 / 62.1 / 25.7, n=3448
    "Sentences_66Agree.txt": (514, 2531, 1166),   # 12.2 / 60.1 / 27.7, n=4211
    "Sentences_50Agree.txt": (603, 2873, 1364),   # 12.5 / 59.4 / 28.2, n=4840
}

COMPANIES = [
    "Valmara", "Norrfors Group", "Kestrel Capital", "Aurico", "Baltic Foods",
    "Helvion", "Tammer Steel", "Lakeshore Paper", "Pohjola Components", "Sievi Marine",
    "Arkturus", "Fennovia", "Koski Energy", "Mariehamn Shipping", "Oulu Optics",
    "Ravena Retail", "Saimaa Chemicals", "Turku Logistics", "Vantaa Media", "Westram",
    "Aaltonen Works", "Borealis Mining", "Celsia Networks", "Drakkar Industries", "Eirlys",
    "Fjordline Freight", "Granholm", "Hailuoto Timber", "Ilves Electronics", "Jokela Motors",
    "Kaleva Print", "Lumivaara", "Merikanto Foods", "Nestor Pumps", "Orava Properties",
    "Peltola Farms", "Quantum Textiles", "Rauma Cranes", "Société Fennica", "Taiga Airlines",
    "Ålandia Bank", "Björkman Partners",
]

SECTORS = [
    "machinery", "paper", "telecom", "retail", "banking", "construction",
    "shipping", "software", "pharmaceuticals", "electronics", "forestry",
    "insurance", "mining", "food processing", "energy", "textiles",
]

COUNTRIES = [
    "Finland", "Sweden", "Norway", "Estonia", "Germany", "Poland",
    "Denmark", "Lithuania", "Latvia", "Russia", "France", "Britain",
]

CITIES = [
    "Helsinki", "Espoo", "Tampere", "Oulu", "Turku", "Stockholm",
    "Tallinn", "Riga", "Vilnius", "Gdansk", "Hamburg", "Copenhagen",
]

QUARTERS = ["first", "second", "third", "fourth"]
YEARS = [str(y) for y in range(2004, 2014)]
INTS = [str(n) for n in (2, 3, 5, 8, 10, 12, 15, 20, 25, 30, 40, 45, 50, 60, 75, 80, 90, 100,
                         110, 120, 150, 180, 200, 240, 250, 300, 320, 350, 400, 450, 500, 600,
                         700, 750, 800, 900)]
DECIMALS = ["0.5", "1.2", "1.8", "2.4", "3.1", "3.7", "4.2", "4.9", "5.6", "6.3",
            "7.4", "8.8", "9.5", "11.3", "14.6", "17.2", "19.8", "23.5", "28.4", "34.9"]

NEGATIVE_TEMPLATES = [
    "Operating profit fell to EUR {dec} mn from EUR {dec2} mn in {year} .",
    "{company} reported an operating loss of EUR {dec} mn for the {quarter} quarter of {year} .",
    "Net sales decreased by {dec} % to EUR {int} mn in {year} .",
    "{company} will cut up to {int} jobs at its {city} unit .",
    "Shares of {company} dropped {dec} % after a profit warning issued on weak {sector} demand .",
    "The company lowered its full year guidance for the {sector} business .",
    "{company} said its {quarter} quarter earnings per share slipped to EUR {dec} from EUR {dec2} .",
    "Pretax profit at {company} shrank to EUR {dec} mn as {sector} orders dried up in {country} .",
    "{company} warned that weaker demand in {country} will weigh on margins in {year} .",
    "Order intake in the {sector} segment plunged {dec} % from the previous year .",
    "{company} booked a EUR {int} mn writedown on its {city} plant .",
    "The {city} based group swung to a net loss of EUR {dec} mn in the {quarter} quarter .",
    "{company} suspended its dividend after sales in {country} collapsed by {dec} % .",
    "Production at the {city} mill will be idled for {int} weeks due to poor demand .",
    "{company} shares lost {dec} % in {city} trading after the downbeat {year} outlook .",
]

NEUTRAL_TEMPLATES = [
    "{company} is a {country} company specialising in {sector} products and services .",
    "The company operates {int} outlets in {country} and employs about {int2} people .",
    "{company} said the transaction is expected to close in the {quarter} quarter of {year} .",
    "The order was booked in the {sector} segment of {company} .",
    "{company} has its head office in {city} and a production unit in {country} .",
    "The contract covers deliveries of {sector} equipment to {country} during {year} .",
    "{company} will publish its {quarter} quarter results on the {int} th of the month .",
    "The value of the deal was not disclosed by {company} .",
    "{company} appointed a new managing director for its {sector} division in {city} .",
    "Under the agreement {company} will supply {sector} systems to a customer in {country} .",
    "The shares of {company} are listed on the {city} stock exchange .",
    "{company} holds a {dec} % stake in the {sector} venture based in {city} .",
    "The {sector} unit of {company} accounts for {dec} % of group net sales .",
    "{company} and its partner agreed to review the {sector} joint venture during {year} .",
    "The plant in {city} manufactures components for the {sector} industry .",
    "{company} transferred its {sector} operations to the new subsidiary in {country} .",
]

POSITIVE_TEMPLATES = [
    "Operating profit rose to EUR {dec} mn from EUR {dec2} mn a year earlier .",
    "{company} reported a {dec} % increase in net sales for {year} .",
    "Earnings per share climbed to EUR {dec} from EUR {dec2} in the {quarter} quarter .",
    "{company} won a EUR {int} mn order for {sector} equipment from {country} .",
    "Net profit at {company} nearly doubled to EUR {dec} mn in {year} .",
    "{company} raised its full year outlook on strong {sector} demand in {country} .",
    "Sales in the {sector} segment grew by {dec} % driven by new contracts in {city} .",
    "{company} shares gained {dec} % in {city} after the upbeat {quarter} quarter report .",
    "The company expects profitability to improve clearly in {year} .",
    "{company} signed its largest ever {sector} contract worth EUR {int} mn .",
    "Order intake rose {dec} % and the order book reached a record EUR {int} mn .",
    "{company} will hire {int} new employees at its expanding {city} site .",
    "The {quarter} quarter operating margin widened to {dec} % from {dec2} % a year ago .",
    "{company} completed the {sector} acquisition which strengthens its position in {country} .",
    "Cash flow from operations improved to EUR {dec} mn for {company} in {year} .",
]

# Short records keep the minimum token count at 2 (word + period).
SHORT_SENTENCES = {
    "negative": ["Weak .", "Disappointing ."],
    "neutral": ["Unchanged .", "Neutral ."],
    "positive": ["Excellent .", "Strong ."],
}

# Base for the single longest record; padded to exactly 82 basic tokens and
# present only in the 50 % file so the full set's maximum matches the
# published figure.
LONG_SENTENCE_TEMPLATE = (
    "Following the completion of the previously announced combination of its "
    "paper , packaging and forestry operations with the {sector} businesses acquired "
    "in {country} , {company} expects consolidated net sales of approximately EUR "
    "{int} mn for {year} , an operating margin of around {dec} % , stable cash flow "
    "from its {int2} production units in {city} and {city2} , and a gradual recovery "
    "of demand across all customer segments ."
)

LONG_SENTENCE_FILLERS = [
    "supported", "by", "a", "solid", "balance", "sheet", "and", "a", "broad",
    "customer", "base", "in", "the", "nordic", "region", "according", "to",
    "the", "board", "of", "directors",
]


def craft_long_sentence(rng: random.Random) -> str:
    """Pad the long template with single-token fillers to exactly 82 tokens."""
    words = fill(LONG_SENTENCE_TEMPLATE, rng)[:-2].rstrip().split(" ")
    i = 0
    while len(basic_tokenize(" ".join(words) + " .")) < 82:
        words.append(LONG_SENTENCE_FILLERS[i % len(LONG_SENTENCE_FILLERS)])
        i += 1
    while len(basic_tokenize(" ".join(words) + " .")) > 82:
        words.pop()
    return " ".join(words) + " ."


CONNECTORS = [" , while ", " , and ", " , whereas ", " , as "]


def fill(template: str, rng: random.Random) -> str:
    mapping = {
        "company": rng.choice(COMPANIES),
        "sector": rng.choice(SECTORS),
        "country": rng.choice(COUNTRIES),
        "city": rng.choice(CITIES),
        "city2": rng.choice(CITIES),
        "quarter": rng.choice(QUARTERS),
        "year": rng.choice(YEARS),
        "int": rng.choice(INTS),
        "int2": rng.choice(INTS),
        "dec": rng.choice(DECIMALS),
        "dec2": rng.choice(DECIMALS),
    }
    return template.format(**mapping)


def generate_class_sentences(templates: list[str], count: int, rng: random.Random,
                             taken: set[str]) -> list[str]:
    """Unique sentences; roughly a quarter are compounds for a longer tail."""
    out: list[str] = []
    while len(out) < count:
        sentence = fill(rng.choice(templates), rng)
        if rng.random() < 0.25:
            n_extra = rng.choice((1, 1, 2))
            for _ in range(n_extra):
                extra = fill(rng.choice(templates), rng)
                if extra.startswith("The "):
                    extra = "the " + extra[4:]
                sentence = sentence[:-2].rstrip() + rng.choice(CONNECTORS) + extra
        # The crafted 82-token record must stay the unique maximum.
        if sentence not in taken and len(basic_tokenize(sentence)) <= 70:
            taken.add(sentence)
            out.append(sentence)
    return out


def build_phrasebank() -> dict[str, list[tuple[str, str]]]:
    rng = random.Random(SEED)
    taken: set[str] = set()
    n50 = FILE_COUNTS["Sentences_50Agree.txt"]

    pools = {
        "negative": generate_class_sentences(NEGATIVE_TEMPLATES, n50[0], rng, taken),
        "neutral": generate_class_sentences(NEUTRAL_TEMPLATES, n50[1], rng, taken),
        "positive": generate_class_sentences(POSITIVE_TEMPLATES, n50[2], rng, taken),
    }
    # Two-token records go at the head of each pool so every agreement subset
    # carries them; they set the corpus-wide minimum.
    for label, shorts in SHORT_SENTENCES.items():
        pools[label] = shorts + pools[label][: len(pools[label]) - len(shorts)]

    long_sentence = craft_long_sentence(rng)
    assert len(basic_tokenize(long_sentence)) == 82
    # Swap it into the tail of the neutral pool: present only in the 50 % file.
    pools["neutral"][-1] = long_sentence

    files = {}
    for name, (n_neg, n_neu, n_pos) in FILE_COUNTS.items():
        records = (
            [(s, "negative") for s in pools["negative"][:n_neg]]
            + [(s, "neutral") for s in pools["neutral"][:n_neu]]
            + [(s, "positive") for s in pools["positive"][:n_pos]]
        )
        # The 50 % pools end with the long sentence; slicing from the head
        # would drop it, so take neutral records for the full file from the
        # complete pool.
        if name == "Sentences_50Agree.txt":
            records = (
                [(s, "negative") for s in pools["negative"]]
                + [(s, "neutral") for s in pools["neutral"]]
                + [(s, "positive") for s in pools["positive"]]
            )
        random.Random(SEED + len(name)).shuffle(records)
        files[name] = records
    return files


NEWS_OPENERS = [
    "{company} said on Monday that its {sector} division won a major order in {country}.",
    "{company} published its {quarter} quarter report in {city} on Thursday.",
    "Shares in {company} were in focus after the group updated its {year} outlook.",
    "{company} announced a reorganisation of its {sector} operations.",
]

NEWS_BODY = [
    "The order covers deliveries of {sector} equipment over the next {int} months.",
    "Net sales for the period reached EUR {int} mn, compared with EUR {int2} mn a year earlier.",
    "The company said demand in {country} remained {tone} throughout the quarter.",
    "Analysts in {city} had expected an operating profit of about EUR {dec} mn.",
    "Production at the {city} site will be adjusted to match the new order flow.",
    "The group employs {int} people in {country} and neighbouring markets.",
    "Management reiterated its guidance for {year}.",
    "The {sector} unit contributed {dec} % of group revenue in the period.",
    "Mr. Virtanen, chief executive of the group, commented on the figures at a briefing in {city}.",
    "The transaction is subject to approval by competition authorities in {country}.",
    "Deliveries are scheduled to begin in the {quarter} quarter of {year}.",
    "The company booked a one off item of EUR {dec} mn related to the {city} plant.",
]

NEWS_CLOSERS = [
    "The stock closed {dec} % higher in {city} trading.",
    "Further details will be given at the annual general meeting.",
    "The company will publish its next interim report in the {quarter} quarter.",
    "No financial terms were disclosed.",
]


def build_news(n_docs: int = 60) -> str:
    rng = random.Random(SEED + 7)
    docs = []
    for _ in range(n_docs):
        n_body = rng.randint(2, 6)
        parts = [fill_news(rng.choice(NEWS_OPENERS), rng)]
        parts += [fill_news(rng.choice(NEWS_BODY), rng) for _ in range(n_body)]
        parts.append(fill_news(rng.choice(NEWS_CLOSERS), rng))
        docs.append(" ".join(parts))
    return "\n\n".join(docs) + "\n"


def fill_news(template: str, rng: random.Random) -> str:
    mapping = {
        "company": rng.choice(COMPANIES),
        "sector": rng.choice(SECTORS),
        "country": rng.choice(COUNTRIES),
        "city": rng.choice(CITIES),
        "quarter": rng.choice(QUARTERS),
        "year": rng.choice(YEARS),
        "int": rng.choice(INTS),
        "int2": rng.choice(INTS),
        "dec": rng.choice(DECIMALS),
        "tone": rng.choice(["stable", "soft", "robust", "mixed"]),
    }
    return template.format(**mapping)


SYNTHETIC_EXTRAS = [
    "demand for {sector} services in {country} continued to strengthen , lifting the outlook for {company}",
    "margin pressure in the {sector} market left {company} guiding below consensus for {year}",
    "{company} maintained its market share in {sector} while overall volumes were flat",
    "the refinancing completed by {company} extends debt maturities without changing leverage",
    "{company} delivered record {quarter} quarter profitability on the back of {sector} exports to {country}",
    "inventory levels across the {sector} chain normalised , supporting a steady price environment",
    "{company} flagged higher raw material costs that will erode {sector} margins in {year}",
]


def build_synthetic(n_records: int = 300) -> str:
    rng = random.Random(SEED + 13)
    labels = ["positive", "negative", "neutral", "negative", "positive", "neutral", "negative"]
    lines = []
    taken: set[str] = set()
    while len(lines) < n_records:
        i = rng.randrange(len(SYNTHETIC_EXTRAS))
        text = fill_news(SYNTHETIC_EXTRAS[i], rng)
        text = text[0].upper() + text[1:] + " ."
        if text in taken:
            continue
        taken.add(text)
        lines.append(json.dumps({"text": text, "label": labels[i]}, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def build_vocab(corpora: list[str]) -> str:
    words: set[str] = set()
    for text in corpora:
        words.update(basic_tokenize(text))
    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    # A few continuation pieces so subword splitting has something to bite on
    # for out-of-corpus words.
    pieces = ["##s", "##ing", "##ed", "##er", "##est", "##ly", "##al", "##ion"]
    return "\n".join(specials + sorted(words) + pieces) + "\n"


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    phrasebank = build_phrasebank()
    all_text: list[str] = []
    for name, records in phrasebank.items():
        body = "".join(f"{text}@{label}\n" for text, label in records)
        (OUT_DIR / name).write_bytes(body.encode("iso-8859-1"))
        all_text.extend(text for text, _ in records)
        print(f"wrote {name}: {len(records)} records")

    news = build_news()
    (OUT_DIR / "news_sample.txt").write_text(news, encoding="utf-8")
    print(f"wrote news_sample.txt: {news.count(chr(10) + chr(10)) + 1} documents")

    synthetic = build_synthetic()
    (OUT_DIR / "synthetic_sample.jsonl").write_text(synthetic, encoding="utf-8")
    print(f"wrote synthetic_sample.jsonl: {len(synthetic.splitlines())} records")

    vocab = build_vocab(all_text + [news] + [json.loads(l)["text"] for l in synthetic.splitlines()])
    (OUT_DIR / "vocab.txt").write_text(vocab, encoding="utf-8")
    print(f"wrote vocab.txt: {len(vocab.splitlines())} tokens")


if __name__ == "__main__":
    main()
