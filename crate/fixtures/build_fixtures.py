"""Regenerate the end-to-end and evaluation fixtures and print the expected
similarities computed by an implementation independent of the Rust code
(nltk's Porter stemmer in ORIGINAL_ALGORITHM mode, a regex tokenizer, and a
regex post cleaner).

    pip install nltk
    python3 fixtures/build_fixtures.py

The printed values are frozen into the Rust tests; rerunning must not change
them.
"""

import json
import math
import random
import re
from collections import Counter
from datetime import datetime, timedelta, timezone
from pathlib import Path

from nltk.stem.porter import PorterStemmer

ROOT = Path(__file__).resolve().parent
STOP_FILE = ROOT.parent / "crates" / "core" / "src" / "stopwords_en.txt"
STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def tokens(text):
    return [t for t in re.split(r"[^\w]|_", text.lower()) if len(t) >= 2]


STOP = set()
for line in STOP_FILE.read_text().splitlines():
    line = line.strip()
    if line and not line.startswith("#"):
        STOP.add(line.lower())
        STOP.update(tokens(line))


def vector(text):
    out = Counter()
    for t in tokens(text):
        if t in STOP:
            continue
        s = t if len(t) <= 2 else STEMMER.stem(t)
        if s and s not in STOP:
            out[s] += 1
    return out


def cosine(a, b):
    if not a or not b:
        return 0.0
    dot = sum(a[k] * b[k] for k in a if k in b)
    return dot / (math.sqrt(sum(v * v for v in a.values())) * math.sqrt(sum(v * v for v in b.values())))


def clean(text):
    words = []
    for tok in text.split():
        if re.match(r"^\W*(https?://|www\.)", tok, re.I):
            continue
        tok = re.sub(r"^[^\w#@]+|[^\w#@]+$", "", tok)
        if tok.startswith("@"):
            continue
        tok = re.sub(r"^#+", "", tok)
        tok = re.sub(r"^\W+|\W+$", "", tok)
        if not tok or tok.lower() in ("rt", "mt"):
            continue
        words.append(tok.lower())
    return " ".join(words)


def page(main, title="Example", nav=True):
    nav_html = '<div class="nav"><a href="/">Home</a> <a href="/about">About</a></div>' if nav else ""
    return (
        f"<html><head><title>{title}</title></head><body>{nav_html}"
        f"<p>{main}</p><div class=\"footer\">Copyright example</div></body></html>"
    )


def write_jsonl(path, rows):
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


START = datetime(2013, 2, 28, 12, 0, tzinfo=timezone.utc)


def ts(i):
    return (START - timedelta(hours=i)).strftime("%Y-%m-%dT%H:%M:%SZ")


# ---------------------------------------------------------------- e2e
def build_e2e():
    out = ROOT / "e2e"
    out.mkdir(exist_ok=True)
    target = "http://blog.example.org/2012/02/digital-content-lost.html"
    c1 = "http://www.cs.example.edu/dl-2012.html"
    c2 = "http://dashes.example.com/blog-it.html"
    texts = []
    texts += [f"RT @cairowatcher: Egypt revolution lost http://t.co/e{i}" for i in range(4)]
    texts += ["Egypt, revolution... lost! http://t.co/e9"]
    texts += ["Egypt revolution lost (@ndiipp) http://t.co/e7", "MT @x Egypt revolution lost http://t.co/e6"]
    texts += ["Egypt: the archives of the spring http://t.co/s1", "Egypt: the archives of the spring http://t.co/s2"]
    texts += ["#archive it is digital http://t.co/d1"]
    chatter = ["RT @a http://t.co/x", "@b this is it http://t.co/y", "it was http://t.co/z",
               "what is this? http://t.co/w", "here it is http://t.co/v", "RT @c: here it is http://t.co/u"]
    while len(texts) < 37:
        texts.append(chatter[len(texts) % len(chatter)])
    authors = ["cairowatcher", "archivist", "ndiipp", "textfiles", "newsdesk", "webarchiving"]
    rows = []
    for i, t in enumerate(texts):
        urls = [{"short": t.split()[-1], "resolved": target}]
        if i in (0, 5, 12):
            urls.append({"short": "http://bit.ly/dl12", "resolved": c1})
        if i == 20:
            urls.append({"short": "http://bit.ly/dash", "resolved": c2})
        rows.append({"id": f"e{i:02d}", "author": authors[i % len(authors)], "text": t,
                     "created_at": ts(i), "urls": urls})
    write_jsonl(out / "posts.jsonl", rows)

    doc_text = " ".join(c for c in (clean(r["text"]) for r in rows) if c)
    doc = vector(doc_text)

    mains = {
        "http://news.example.com/egypt-protests":
            "Reports from Egypt and Cairo: in Cairo the protests went on, and in Cairo and Egypt the protest was loud.",
        "http://www.example.net/arab-spring-archive":
            "The Egypt and the revolution: Egypt lost, and Egypt lost the archives of Cairo in Cairo, and the revolutions.",
        "http://history.example.edu/revolution":
            "A revolution is not only a revolution; it is the revolutions and the history and the histories of it.",
        "http://cooking.example.com/pasta":
            "To make the pasta, cook the pasta in water with a tomato and some of the oil until it is done.",
        "http://redirect.example.com/new":
            "What was lost is lost, and what is lost in the spring is not here any more for all of us.",
        "http://www.example.org/digital-archives":
            "The digital archives and the digital archive of the library: these are archived for all of us.",
        "http://www.cs.example.edu/dl-2012.html":
            "Egypt and the revolution: the Egypt revolution archives, lost or archived, and the social media of it.",
        "http://dashes.example.com/blog-it.html":
            "If you did not blog it, it did not happen; a blog is where it should be, blog it or it is gone.",
        "http://empty.example.com/":
            "It is what it is, and that is all there is to it, so here we are again with this.",
    }
    search = [
        "http://news.example.com/egypt-protests",
        "http://www.example.net/arab-spring-archive",
        "http://dead.example.org/page",
        "http://history.example.edu/revolution",
        "http://cooking.example.com/pasta",
        "http://redirect.example.com/old",
        "http://empty.example.com/",
        "http://www.example.org/digital-archives",
        "http://loop.example.com/a",
        "http://broken.example.com/",
    ]
    pages = [{"url": target, "status": 404, "body": "<html><body><p>Not found</p></body></html>"}]
    for url, main in mains.items():
        pages.append({"url": url, "status": 200, "body": page(main)})
    pages += [
        {"url": "http://dead.example.org/page", "status": 404, "body": "gone"},
        {"url": "http://redirect.example.com/old", "status": 301, "location": "/new"},
        {"url": "http://loop.example.com/a", "status": 302, "location": "http://loop.example.com/b"},
        {"url": "http://loop.example.com/b", "status": 302, "location": "http://loop.example.com/a"},
        {"url": "http://broken.example.com/", "status": 500, "body": "error"},
    ]
    write_jsonl(out / "pages.jsonl", pages)

    sig = sorted(doc.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
    query = " ".join(t for t, _ in sig)
    results = [{"uri": u, "snippet": f"result {i + 1}"} for i, u in enumerate(search)]
    with open(out / "search.json", "w") as f:
        json.dump({query: results}, f, indent=1)
        f.write("\n")

    print("e2e doc vector:", dict(sorted(doc.items())))
    print("e2e query:", query)
    final = {u: u for u in mains}
    final["http://redirect.example.com/old"] = "http://redirect.example.com/new"
    for u in search + [c1, c2]:
        f = final.get(u, u)
        if f in mains:
            v = vector(mains[f])
            print(f"  {u}: {dict(sorted(v.items()))} cos={cosine(doc, v):.12f}")


# ---------------------------------------------------------------- eval
TOPICS = {
    "nile-floods": ["nile", "floods", "river", "farmers", "delta"],
    "cairo-metro": ["metro", "cairo", "train", "stations", "line"],
    "tahrir-square": ["tahrir", "square", "protest", "crowds", "night"],
    "pyramid-restoration": ["pyramid", "restoration", "stones", "giza", "team"],
    "coptic-music": ["coptic", "music", "choir", "hymns", "church"],
    "red-sea-reef": ["reef", "coral", "divers", "fish", "sea"],
}
FILLER = ["the", "and", "of", "is", "it", "this", "in", "on", "was", "for", "with", "a"]
OTHER = ["market", "budget", "weather", "football", "election", "bridge", "museum", "ferry", "garden", "harbor"]


def sentence(rng, words, n):
    out = []
    for _ in range(n):
        out.append(rng.choice(words) if rng.random() < 0.55 else rng.choice(FILLER))
    return " ".join(out)


def build_eval():
    out = ROOT / "eval"
    out.mkdir(exist_ok=True)
    rng = random.Random(731)
    base = "http://eval.example.org/"
    ranks = {"nile-floods": 1, "cairo-metro": 2, "tahrir-square": None,
             "pyramid-restoration": 4, "coptic-music": None, "red-sea-reef": 1}
    posts, pages, search = [], [], {}
    expected = []
    for ti, (slug, words) in enumerate(TOPICS.items()):
        target = base + slug
        n_posts = 12 if slug == "red-sea-reef" else 30 + 2 * ti
        target_text = sentence(rng, words, 60)
        pages.append({"url": target, "status": 200, "body": page(target_text, title=slug)})
        rows = []
        for p in range(n_posts):
            text = sentence(rng, words + OTHER[:2], rng.randint(4, 9))
            if p % 3 == 0:
                text = f"RT @user{p % 7}: {text}"
            urls = [{"short": f"http://t.co/{slug[:4]}{p}", "resolved": target}]
            if p % 5 == 0:
                urls.append({"short": f"http://bit.ly/{slug[:4]}co", "resolved": f"{base}related/{slug}"})
            if p % 11 == 0:
                urls.append({"short": f"http://bit.ly/{slug[:4]}c2", "resolved": f"{base}related/{slug}-2"})
            rows.append({"id": f"{slug}-{p:02d}", "author": f"user{p % 7}", "text": f"{text} {urls[0]['short']}",
                         "created_at": ts(p + 100 * ti), "urls": urls})
        posts += rows
        doc_text = " ".join(c for c in (clean(r["text"]) for r in rows) if c)
        doc = vector(doc_text)
        sig = sorted(doc.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
        query = " ".join(t for t, _ in sig)

        texts = {}
        results = []
        k = ranks[slug]
        for pos in range(1, 11):
            if k == pos:
                results.append(target)
                continue
            url = f"{base}search/{slug}/{pos}"
            mix = rng.random()
            pool = words[: rng.randint(1, 5)] + rng.sample(OTHER, 3)
            texts[url] = sentence(rng, pool, 40) if mix > 0.15 else sentence(rng, OTHER, 40)
            results.append(url)
        # One unreachable result per target.
        dead = results[-1] if results[-1] != target else results[-2]
        texts.pop(dead)
        pages.append({"url": dead, "status": 404, "body": "gone"})
        for url, text in texts.items():
            pages.append({"url": url, "status": 200, "body": page(text)})
        co = [f"{base}related/{slug}", f"{base}related/{slug}-2"]
        texts[co[0]] = sentence(rng, words + OTHER[:4], 50)
        texts[co[1]] = sentence(rng, words[:2] + OTHER[4:], 50)
        for c in co:
            pages.append({"url": c, "status": 200, "body": page(texts[c])})
        search[query] = [{"uri": u, "snippet": ""} for u in results]

        orig = vector(target_text)
        sims = {u: cosine(orig, vector(t)) for u, t in texts.items()}
        others = [u for u in results if u != target]
        first = next((sims[u] for u in others if u in sims), 0.0)
        best_s = max([sims[u] for u in others if u in sims] + [0.0])
        best_c = max([sims[u] for u in co] + [0.0])
        expected.append({
            "target": target, "posts": n_posts, "query": query,
            "sim_tweetdoc": cosine(orig, doc), "sim_first_search": first,
            "best_sim_search": best_s, "best_sim_cooccurring": best_c,
            "best_sim_union": max(best_s, best_c), "rank": k,
        })
    write_jsonl(out / "posts.jsonl", posts)
    write_jsonl(out / "pages.jsonl", pages)
    with open(out / "search.json", "w") as f:
        json.dump(search, f, indent=1)
        f.write("\n")
    (out / "dataset.txt").write_text(
        "# five pretend-missing pages\n" + "".join(base + s + "\n" for s in list(TOPICS)[:5]))
    (out / "sparse.txt").write_text(base + "red-sea-reef\n")

    sims = [0.91, 0.0, 0.74, 0.41, 0.70, 0.12, 0.85, 0.55, 0.33, 0.69]
    records = [{"target": f"http://records.example.org/{i}", "corpus_size": 30 + i,
                "sim_tweetdoc": s, "sim_first_search": s, "best_sim_search": s,
                "best_sim_cooccurring": 0.0, "best_sim_union": s,
                "rank_of_target_in_search": None} for i, s in enumerate(sims)]
    with open(out / "records_10.json", "w") as f:
        json.dump(records, f, indent=1)
        f.write("\n")

    for e in expected:
        print(json.dumps(e))


if __name__ == "__main__":
    build_e2e()
    build_eval()
