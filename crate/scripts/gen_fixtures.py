#!/usr/bin/env python3
"""Regenerate the bundled test fixtures under crates/core/fixtures/.

Writes a small lexical database in the WordNet 3.x plain-text layout
(index.* / data.* / *.exc), a paraphrase-pair corpus in the PAWS TSV
layout, and a two-class probe task file. Output is deterministic.
"""

import os
import random

ROOT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures")

# (key, ss_type, lex_filenum, lemmas, gloss)
# lemmas may carry an adjective marker, e.g. "asleep(p)".
VERBS = [
    ("decline", ["decline", "refuse", "turn_down"], "show unwillingness towards"),
    ("accept", ["accept"], "consider or hold as true"),
    ("comment", ["comment", "remark"], "make or write a comment on"),
    ("open_v", ["open", "unlock"], "cause to open"),
    ("close_v", ["close", "shut"], "move so that an opening is closed"),
    ("buy", ["buy", "purchase"], "obtain by purchase"),
    ("sell", ["sell", "vend"], "exchange for money"),
    ("begin", ["begin", "start", "commence"], "take the first step"),
    ("end", ["end", "finish", "terminate"], "have an end"),
    ("love", ["love", "adore"], "have a great affection for"),
    ("hate", ["hate", "detest"], "dislike intensely"),
    ("win", ["win", "triumph"], "be the winner"),
    ("lose", ["lose"], "fail to win"),
    ("increase", ["increase", "raise", "boost"], "make bigger or more"),
    ("decrease", ["decrease", "reduce", "lower"], "make smaller"),
    ("arrive", ["arrive", "come"], "reach a destination"),
    ("leave", ["leave", "depart"], "go away from a place"),
    ("allow", ["allow", "permit", "let"], "make it possible"),
    ("forbid", ["forbid", "prohibit", "ban"], "command against"),
    ("remember", ["remember", "recall", "recollect"], "recall knowledge from memory"),
    ("forget", ["forget"], "dismiss from the mind"),
    ("agree", ["agree", "concur"], "be in accord"),
    ("disagree", ["disagree", "differ", "dissent"], "be of different opinions"),
    ("push", ["push", "shove"], "move with force"),
    ("pull", ["pull", "tug"], "apply force to move towards oneself"),
    ("run", ["run", "sprint", "jog"], "move fast by using legs"),
    ("walk", ["walk", "stroll"], "use feet to advance"),
    ("ask", ["ask", "inquire", "enquire"], "inquire about"),
    ("answer", ["answer", "respond", "reply"], "react verbally"),
    ("help", ["help", "assist", "aid"], "give help or assistance"),
    ("build", ["build", "construct"], "make by combining materials"),
    ("destroy", ["destroy", "demolish"], "do away with"),
    ("find", ["find", "discover"], "come upon after searching"),
    ("show", ["show", "display", "exhibit"], "make visible"),
    ("hide", ["hide", "conceal"], "prevent from being seen"),
    ("say", ["say", "state", "tell"], "express in words"),
    ("make", ["make", "create", "produce"], "bring into existence"),
    ("see", ["see", "observe", "watch"], "perceive by sight"),
    ("think", ["think", "believe", "consider"], "judge or regard"),
    ("use", ["use", "employ", "utilize"], "put into service"),
    ("need", ["need", "require"], "have need of"),
    ("want", ["want", "desire", "wish"], "feel or have a desire for"),
    ("give", ["give", "provide", "supply"], "transfer possession of"),
    ("take", ["take", "receive", "get"], "come into possession of"),
    ("work", ["work", "labor", "toil"], "exert oneself"),
    ("play", ["play", "perform"], "participate in games or sport"),
    ("move", ["move", "shift", "relocate"], "change location"),
    ("live", ["live", "reside", "dwell"], "inhabit a place"),
    ("die", ["die", "perish", "expire"], "pass from physical life"),
    ("rise", ["rise", "ascend", "climb"], "move upward"),
    ("fall", ["fall", "drop", "descend"], "descend under gravity"),
    ("succeed", ["succeed", "prosper", "thrive"], "attain success"),
    ("fail", ["fail", "flunk"], "be unsuccessful"),
    ("laugh", ["laugh", "chuckle", "giggle"], "produce laughter"),
    ("cry", ["cry", "weep", "sob"], "shed tears"),
    ("teach", ["teach", "instruct", "train"], "impart skills or knowledge"),
    ("learn", ["learn", "study"], "gain knowledge"),
    ("speak", ["speak", "talk"], "exchange thoughts"),
    ("write", ["write", "compose", "pen"], "produce a literary work"),
    ("read", ["read", "peruse"], "interpret written text"),
    ("eat", ["eat", "consume", "devour"], "take in solid food"),
    ("drink", ["drink", "sip", "imbibe"], "take in liquids"),
    ("sleep", ["sleep", "slumber", "doze"], "be asleep"),
    ("wake", ["wake", "awaken", "waken"], "stop sleeping"),
    ("cut", ["cut", "slice", "carve"], "separate with an instrument"),
    ("fix", ["fix", "repair", "mend"], "restore by replacing a part"),
    ("break", ["break", "shatter", "smash"], "destroy the integrity of"),
    ("hold", ["hold", "grip", "grasp"], "have or hold in one's hands"),
    ("release", ["release", "free", "liberate"], "grant freedom to"),
    ("include", ["include", "contain"], "have as a part"),
    ("exclude", ["exclude", "omit"], "prevent from being included"),
    ("import", ["import"], "bring in from abroad"),
    ("export", ["export"], "sell abroad"),
    ("attack", ["attack", "assault"], "launch an attack on"),
    ("defend", ["defend", "protect", "guard"], "protect against a challenge"),
    ("enter", ["enter"], "come or go into"),
    ("exit", ["exit"], "move out of"),
    ("send", ["send", "dispatch", "mail"], "cause to be directed"),
    ("report", ["report", "announce", "declare"], "announce as the result of an investigation"),
    ("expect", ["expect", "anticipate"], "regard something as probable"),
    ("plan", ["plan", "intend"], "have the will and intention"),
    ("change", ["change", "alter", "modify"], "cause to change"),
    ("stop", ["stop", "halt", "cease"], "come to a halt"),
    ("visit", ["visit", "tour"], "go to see a place"),
    ("discuss", ["discuss", "debate"], "consider in speech"),
    ("offer", ["offer", "propose", "suggest"], "put forward for consideration"),
    ("explain", ["explain", "clarify"], "make plain and comprehensible"),
    ("worry", ["worry", "fret"], "be worried"),
]

VERB_ANTONYMS = [
    # (src, tgt, word-level?)  word-level links the head lemmas (0101).
    ("decline", "accept", True),
    ("open_v", "close_v", True),
    ("buy", "sell", True),
    ("begin", "end", False),
    ("love", "hate", True),
    ("win", "lose", True),
    ("increase", "decrease", True),
    ("arrive", "leave", False),
    ("allow", "forbid", True),
    ("remember", "forget", True),
    ("agree", "disagree", True),
    ("push", "pull", True),
    ("show", "hide", True),
    ("give", "take", True),
    ("live", "die", True),
    ("rise", "fall", False),
    ("succeed", "fail", True),
    ("laugh", "cry", True),
    ("teach", "learn", True),
    ("sleep", "wake", True),
    ("fix", "break", True),
    ("hold", "release", True),
    ("include", "exclude", True),
    ("import", "export", True),
    ("attack", "defend", True),
    ("enter", "exit", True),
    ("build", "destroy", True),
    ("stop", "begin", True),
]

ADJS = [
    ("good", ["good", "fine"], "having desirable qualities"),
    ("bad", ["bad", "awful"], "having undesirable qualities"),
    ("big", ["big", "large"], "above average in size"),
    ("small", ["small", "little"], "limited in size"),
    ("happy", ["happy", "glad", "joyful"], "enjoying well-being"),
    ("sad", ["sad", "unhappy", "sorrowful"], "experiencing sorrow"),
    ("fast", ["fast", "quick", "rapid"], "acting with speed"),
    ("slow", ["slow", "sluggish"], "not moving quickly"),
    ("hot", ["hot", "warm"], "used of physical heat"),
    ("cold", ["cold", "chilly"], "having a low temperature"),
    ("new", ["new", "fresh", "novel"], "not of long duration"),
    ("old", ["old", "aged"], "advanced in years"),
    ("early", ["early", "premature"], "at or near the beginning"),
    ("late", ["late", "tardy"], "after the expected time"),
    ("last", ["last", "final"], "occurring at the end"),
    ("first", ["first", "initial"], "preceding all others"),
    ("high", ["high", "tall"], "greater than normal in degree"),
    ("low", ["low"], "less than normal in degree"),
    ("easy", ["easy", "simple"], "posing no difficulty"),
    ("difficult", ["difficult", "hard", "tough"], "not easy"),
    ("strong", ["strong", "powerful"], "having strength"),
    ("weak", ["weak", "feeble"], "wanting in strength"),
    ("rich", ["rich", "wealthy"], "possessing material wealth"),
    ("poor", ["poor", "needy"], "having little money"),
    ("clean", ["clean", "spotless"], "free from dirt"),
    ("dirty", ["dirty", "filthy"], "soiled or likely to soil"),
    ("young", ["young", "youthful"], "being in early stages of growth"),
    ("bright", ["bright", "brilliant"], "emitting much light"),
    ("dark", ["dark", "dim"], "devoid of light"),
    ("loud", ["loud", "noisy"], "characterized by high volume"),
    ("quiet", ["quiet", "silent"], "free of noise"),
    ("safe", ["safe", "secure"], "free from danger"),
    ("dangerous", ["dangerous", "risky"], "involving danger"),
    ("open_a", ["open"], "affording free passage"),
    ("closed", ["closed"], "not open"),
    ("important", ["important", "significant"], "of great significance"),
    ("unimportant", ["unimportant", "trivial"], "not important"),
    ("true", ["true", "accurate"], "consistent with fact"),
    ("false", ["false", "untrue"], "not in accordance with fact"),
    ("full", ["full", "complete"], "containing as much as possible"),
    ("empty", ["empty", "vacant"], "holding nothing"),
    ("public", ["public"], "not private"),
    ("private", ["private", "personal"], "confined to particular persons"),
    ("cheap", ["cheap", "inexpensive"], "relatively low in price"),
    ("expensive", ["expensive", "costly", "pricey"], "high in price"),
    ("beautiful", ["beautiful", "lovely", "pretty"], "delighting the senses"),
    ("ugly", ["ugly", "hideous"], "displeasing to the senses"),
    ("smart", ["smart", "clever", "intelligent"], "showing mental alertness"),
    ("stupid", ["stupid", "dumb", "foolish"], "lacking intelligence"),
    ("long", ["long", "lengthy"], "of relatively great length"),
    ("short", ["short", "brief"], "of small duration"),
    ("heavy", ["heavy", "weighty"], "of comparatively great weight"),
    ("light", ["light", "weightless"], "of comparatively little weight"),
    ("friendly", ["friendly", "amicable"], "characteristic of a friend"),
    ("unfriendly", ["unfriendly", "hostile"], "not disposed to friendship"),
    ("busy", ["busy", "occupied"], "actively engaged"),
    ("idle", ["idle", "inactive"], "not in active use"),
    ("wet", ["wet", "damp", "moist"], "covered with liquid"),
    ("dry", ["dry", "arid"], "free from liquid"),
    ("awake", ["awake(p)", "alert"], "not in a state of sleep"),
    ("asleep", ["asleep(p)", "dormant"], "in a state of sleep"),
    ("calm", ["calm", "serene"], "not agitated"),
    ("nervous", ["nervous", "anxious"], "easily agitated"),
    ("honest", ["honest", "sincere"], "not disposed to cheat"),
    ("dishonest", ["dishonest", "deceitful"], "deceptive or fraudulent"),
]

SATELLITES = [
    # (key, lemmas, gloss, head)
    ("huge", ["huge", "enormous", "immense"], "unusually great in size", "big"),
    ("tiny", ["tiny", "minuscule"], "very small", "small"),
    ("swift", ["swift", "speedy"], "moving very fast", "fast"),
]

ADJ_ANTONYMS = [
    ("good", "bad", True),
    ("big", "small", True),
    ("happy", "sad", True),
    ("fast", "slow", True),
    ("hot", "cold", True),
    ("new", "old", True),
    ("early", "late", True),
    ("last", "first", True),
    ("high", "low", True),
    ("easy", "difficult", True),
    ("strong", "weak", True),
    ("rich", "poor", True),
    ("clean", "dirty", True),
    ("young", "old", True),
    ("bright", "dark", True),
    ("loud", "quiet", True),
    ("safe", "dangerous", True),
    ("open_a", "closed", True),
    ("important", "unimportant", False),
    ("true", "false", True),
    ("full", "empty", True),
    ("public", "private", True),
    ("cheap", "expensive", True),
    ("beautiful", "ugly", True),
    ("smart", "stupid", True),
    ("long", "short", True),
    ("heavy", "light", True),
    ("friendly", "unfriendly", False),
    ("busy", "idle", True),
    ("wet", "dry", True),
    ("awake", "asleep", True),
    ("calm", "nervous", True),
    ("honest", "dishonest", False),
]

NOUNS = [
    ("attorney", ["attorney", "lawyer"], "a professional person authorized to practice law"),
    ("friday", ["Friday", "Fri"], "the sixth day of the week"),
    ("comment_n", ["comment", "remark"], "a statement that expresses an opinion"),
    ("case", ["case", "lawsuit"], "a comprehensive term for any proceeding in a court of law"),
    ("question", ["question", "query"], "an instance of questioning"),
    ("company", ["company", "firm"], "an institution created to conduct business"),
    ("city", ["city", "town"], "a large and densely populated urban area"),
    ("car", ["car", "automobile", "motorcar"], "a motor vehicle with four wheels"),
    ("house", ["house", "home"], "a dwelling that serves as living quarters"),
    ("child", ["child", "kid"], "a young person"),
    ("price", ["price", "cost"], "the amount of money needed to purchase something"),
    ("market", ["market", "marketplace"], "the world of commercial activity"),
    ("book", ["book", "volume"], "a written work or composition"),
    ("movie", ["movie", "film", "picture"], "a form of entertainment that enacts a story"),
    ("report_n", ["report", "account"], "a short account of the news"),
    ("team", ["team", "squad"], "a cooperative unit"),
    ("door", ["door"], "a swinging or sliding barrier"),
    ("meeting", ["meeting", "gathering"], "a formally arranged gathering"),
    ("plan_n", ["plan", "program"], "a series of steps to be carried out"),
    ("vehicle", ["vehicle"], "a conveyance that transports people or objects"),
]

ADVS = [
    ("quickly", ["quickly", "rapidly"], "with rapid movements"),
    ("slowly", ["slowly", "easy"], "without speed"),
    ("often", ["often", "frequently"], "many times at short intervals"),
    ("rarely", ["rarely", "seldom"], "not often"),
    ("very", ["very", "really"], "used as an intensifier"),
]

ADV_ANTONYMS = [("quickly", "slowly", True), ("often", "rarely", True)]

NOUN_HYPERNYMS = [("car", "vehicle")]
VERB_HYPERNYM_LINKS = [("run", "move"), ("walk", "move"), ("sell", "give")]

VERB_EXC = {
    "ran": "run", "bought": "buy", "sold": "sell", "began": "begin", "won": "win",
    "lost": "lose", "left": "leave", "gave": "give", "took": "take", "fell": "fall",
    "rose": "rise", "broke": "break", "held": "hold", "taught": "teach",
    "spoke": "speak", "wrote": "write", "ate": "eat", "drank": "drink", "slept": "sleep",
    "woke": "wake", "said": "say", "made": "make", "saw": "see", "thought": "think",
    "found": "find", "built": "build", "hid": "hide", "forgot": "forget", "came": "come",
    "got": "get", "told": "tell", "sent": "send", "chose": "choose", "dug": "dig",
}
ADJ_EXC = {"better": "good", "best": "good", "worse": "bad", "worst": "bad"}
NOUN_EXC = {"children": "child"}

HEADER = [
    "  1 Fixture lexical database used by the test-suite.",
    "  2 Layout follows the WordNet 3.0 plain-text database files.",
    "  3 Content is hand-written and covers a small verb/adjective vocabulary.",
]


def bare(word):
    return word.split("(")[0]


def build_files():
    synsets = {}  # key -> dict
    def add(pos, ss_type, lexfile, key, lemmas, gloss):
        synsets[key] = dict(pos=pos, ss_type=ss_type, lexfile=lexfile, lemmas=lemmas,
                            gloss=gloss, ptrs=[], frames=pos == "v")
    for key, lemmas, gloss in VERBS:
        add("v", "v", 31, key, lemmas, gloss)
    for key, lemmas, gloss in ADJS:
        add("a", "a", 0, key, lemmas, gloss)
    for key, lemmas, gloss, _head in SATELLITES:
        add("a", "s", 0, key, lemmas, gloss)
    for key, lemmas, gloss in NOUNS:
        add("n", "n", 4, key, lemmas, gloss)
    for key, lemmas, gloss in ADVS:
        add("r", "r", 2, key, lemmas, gloss)

    def ant(src, tgt, word_level):
        idx = "0101" if word_level else "0000"
        synsets[src]["ptrs"].append(("!", tgt, idx))
        synsets[tgt]["ptrs"].append(("!", src, idx))
    for table in (VERB_ANTONYMS, ADJ_ANTONYMS, ADV_ANTONYMS):
        for src, tgt, word_level in table:
            ant(src, tgt, word_level)
    for key, _l, _g, head in SATELLITES:
        synsets[key]["ptrs"].append(("&", head, "0000"))
        synsets[head]["ptrs"].append(("&", key, "0000"))
    for hypo, hyper in NOUN_HYPERNYMS + VERB_HYPERNYM_LINKS:
        synsets[hypo]["ptrs"].append(("@", hyper, "0000"))
        synsets[hyper]["ptrs"].append(("~", hypo, "0000"))

    files = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
    # Lines have fixed-width offsets, so lengths are known before offsets are.
    offsets = {}
    lines_by_pos = {}
    for pos in files:
        keys = [k for k, s in synsets.items() if s["pos"] == pos]
        pos_offset = sum(len(h) + 1 for h in HEADER)
        for key in keys:
            offsets[key] = pos_offset
            pos_offset += len(render(synsets[key], key, {k: 0 for k in synsets})) + 1
        lines_by_pos[pos] = keys
    data = {}
    for pos, keys in lines_by_pos.items():
        data[pos] = [render(synsets[k], k, offsets) for k in keys]

    index = {}
    for key, s in synsets.items():
        for i, w in enumerate(s["lemmas"], start=1):
            lemma = bare(w).lower()
            entry = index.setdefault((lemma, s["pos"]), dict(offsets=[], ptrs=set()))
            entry["offsets"].append(offsets[key])
            for sym, _tgt, idx in s["ptrs"]:
                if idx == "0000" or int(idx[:2], 16) == i:
                    entry["ptrs"].add(sym)

    out = os.path.join(ROOT, "wordnet")
    os.makedirs(out, exist_ok=True)
    for pos, name in files.items():
        with open(os.path.join(out, "data." + name), "w") as f:
            for h in HEADER:
                f.write(h + "\n")
            for line in data[pos]:
                f.write(line + "\n")
        with open(os.path.join(out, "index." + name), "w") as f:
            for h in HEADER:
                f.write(h + "\n")
            for (lemma, p) in sorted(k for k in index if k[1] == pos):
                e = index[(lemma, p)]
                ptrs = sorted(e["ptrs"])
                fields = [lemma, p, str(len(e["offsets"])), str(len(ptrs))] + ptrs
                fields += [str(len(e["offsets"])), "0"]
                fields += ["%08d" % o for o in e["offsets"]]
                f.write(" ".join(fields) + "  \n")
    for name, exc in (("verb", VERB_EXC), ("adj", ADJ_EXC), ("noun", NOUN_EXC)):
        with open(os.path.join(out, name + ".exc"), "w") as f:
            for k in sorted(exc):
                f.write("%s %s\n" % (k, exc[k]))
    return synsets, index


def render(s, key, offsets):
    fields = ["%08d" % offsets[key], "%02d" % s["lexfile"], s["ss_type"], "%02x" % len(s["lemmas"])]
    for w in s["lemmas"]:
        fields += [w, "0"]
    fields.append("%03d" % len(s["ptrs"]))
    for sym, tgt, idx in s["ptrs"]:
        fields += [sym, "%08d" % offsets[tgt], SYN_POS[tgt], idx]
    if s["frames"]:
        fields += ["01", "+", "02", "00"]
    return " ".join(fields) + " | " + s["gloss"] + "  "


SYN_POS = {}


SUBJECTS = ["the lawyer", "my friend", "the company", "our team", "the child", "the old man",
            "her sister", "the mayor", "a neighbor", "the teacher", "his brother", "the manager"]
OBJECTS = ["the car", "the house", "the book", "the plan", "the report", "the door",
           "the market", "the movie", "the case", "the question", "the meeting", "the city"]
DAYS = ["Monday", "Tuesday", "Friday", "Sunday", "week", "month", "year"]
VERB_FORMS = [
    # (past, base) for regular verbs present in the fixture
    ("declined", "decline"), ("accepted", "accept"), ("opened", "open"), ("closed", "close"),
    ("purchased", "purchase"), ("started", "start"), ("finished", "finish"), ("loved", "love"),
    ("hated", "hate"), ("increased", "increase"), ("reduced", "reduce"), ("allowed", "allow"),
    ("remembered", "remember"), ("pushed", "push"), ("pulled", "pull"), ("helped", "help"),
    ("destroyed", "destroy"), ("discovered", "discover"), ("showed", "show"), ("used", "use"),
    ("needed", "need"), ("wanted", "want"), ("provided", "provide"), ("received", "receive"),
    ("moved", "move"), ("repaired", "repair"), ("released", "release"), ("included", "include"),
    ("attacked", "attack"), ("defended", "defend"), ("entered", "enter"), ("reported", "report"),
    ("expected", "expect"), ("changed", "change"), ("stopped", "stop"), ("visited", "visit"),
    ("discussed", "discuss"), ("offered", "offer"), ("explained", "explain"), ("watched", "watch"),
    ("considered", "consider"), ("planned", "plan"), ("answered", "answer"), ("asked", "ask"),
]
INF_VERBS = ["comment", "help", "open", "close", "sell", "buy", "start", "finish", "build",
             "repair", "explain", "discuss", "visit", "change", "protect", "answer", "study",
             "move", "show", "hide", "win", "read", "write", "walk", "run"]
ADJ_WORDS = ["good", "bad", "big", "small", "happy", "sad", "fast", "slow", "hot", "cold",
             "new", "old", "early", "late", "last", "first", "high", "low", "easy", "difficult",
             "strong", "weak", "rich", "poor", "clean", "dirty", "young", "bright", "dark",
             "loud", "quiet", "safe", "dangerous", "important", "true", "false", "full",
             "empty", "public", "private", "cheap", "expensive", "beautiful", "ugly", "smart",
             "stupid", "long", "short", "heavy", "light", "friendly", "busy", "idle", "wet", "dry",
             "calm", "nervous", "honest", "huge", "tiny"]
ADVERBS_OPT = ["quickly", "slowly", "often", "rarely"]


def cap(s):
    return s[0].upper() + s[1:]


def sentence(rng):
    subj = rng.choice(SUBJECTS)
    past, _ = rng.choice(VERB_FORMS)
    inf = rng.choice(INF_VERBS)
    a1, a2 = rng.sample(ADJ_WORDS, 2)
    obj = rng.choice(OBJECTS)
    day = rng.choice(DAYS)
    shape = rng.randrange(4)
    if shape == 0:
        return "%s %s to %s the %s %s last %s." % (cap(subj), past, inf, a1, obj.split()[1], day)
    if shape == 1:
        return "%s, a %s and %s person, %s %s on %s." % (
            cap(subj), a1, a2, past, obj, day)
    if shape == 2:
        adv = rng.choice(ADVERBS_OPT)
        return "%s %s %s the %s and %s %s." % (cap(subj), adv, past, a1, a2, obj.split()[1])
    return "Why did %s %s the %s %s so %s?" % (subj, inf, a1, obj.split()[1], a2)


def paraphrase(s, rng):
    # Light rewording: move a trailing time phrase or swap adjective order.
    words = s.rstrip(".?").split(" ")
    end = s[-1]
    if " and " in s:
        i = words.index("and")
        words[i - 1], words[i + 1] = words[i + 1], words[i - 1]
        return " ".join(words) + end
    if words[-2] == "last":
        return "Last " + words[-1] + ", " + words[0].lower() + " " + " ".join(words[1:-2]) + end
    return "In short, " + s[0].lower() + s[1:]


def build_corpus():
    rng = random.Random(20240611)
    rows = []
    seen = set()
    levin = "Levin's attorney, Bo Hitchcock, declined to comment last Friday"
    rows.append((1, levin, "Hitchcock has declined to comment on the case, as has Levin.", 1))
    seen.add(levin)
    pid = 2
    while len(rows) < 1400:
        s1 = sentence(rng)
        if s1 in seen:
            continue
        seen.add(s1)
        if rng.random() < 0.5:
            s2 = paraphrase(s1, rng)
            label = 1
        else:
            s2 = sentence(rng)
            label = 0
        if s1 == s2:
            continue
        rows.append((pid, s1, s2, label))
        pid += 1
    out = os.path.join(ROOT, "corpus")
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "pairs_paws.tsv"), "w") as f:
        f.write("id\tsentence1\tsentence2\tlabel\n")
        for r in rows:
            f.write("%d\t%s\t%s\t%d\n" % r)


POS_WORDS = ["good", "beautiful", "brilliant", "lovely", "smart", "happy", "friendly", "calm",
             "honest", "fresh", "clever", "joyful", "wonderful", "superb", "delightful"]
NEG_WORDS = ["bad", "ugly", "stupid", "awful", "sad", "hostile", "dishonest", "boring",
             "dull", "weak", "filthy", "foolish", "dreadful", "terrible", "hideous"]
NEUTRAL = ["the", "movie", "film", "story", "plot", "actor", "was", "is", "really", "quite",
           "and", "a", "with", "ending", "cast", "script", "music", "very", "overall", "scene"]


def build_probe():
    rng = random.Random(99)
    out = os.path.join(ROOT, "probe")
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "mr_fixture.tsv"), "w") as f:
        for i in range(240):
            label = i % 2
            bag = POS_WORDS if label == 1 else NEG_WORDS
            words = rng.sample(NEUTRAL, 6) + rng.sample(bag, 2)
            rng.shuffle(words)
            f.write("%d\t%s\n" % (label, " ".join(words)))


def main():
    for key, *_rest in VERBS:
        SYN_POS[key] = "v"
    for key, *_rest in ADJS:
        SYN_POS[key] = "a"
    for key, *_rest in SATELLITES:
        SYN_POS[key] = "s"
    for key, *_rest in NOUNS:
        SYN_POS[key] = "n"
    for key, *_rest in ADVS:
        SYN_POS[key] = "r"
    synsets, _ = build_files()
    print("synsets:", len(synsets))
    build_corpus()
    build_probe()


if __name__ == "__main__":
    main()
