#!/usr/bin/env python
"""Author the bundled toy grammars and record their regression suites.

Builds the English and German resource files from structured literals,
validates them, generates every suite sentence, asserts the expected
surface strings, and writes canonical JSON plus the recorded suites into
the package data directory.
"""

from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from latticegen.generator import generate
from latticegen.resources import ResourceSet, save_resources
from latticegen.semantics import parse_spl
from latticegen.suite import Suite, record_example

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "latticegen", "data")


# ---------------------------------------------------------------------------
# Small builders


def system(name, region, entry, outputs, chooser=None):
    doc = {"name": name, "region": region, "entry": entry, "outputs": outputs}
    if chooser:
        doc["chooser"] = chooser
    return doc


def out(feature, *realizations):
    return {"feature": feature, "realizations": list(realizations)}


def ins(fn):
    return {"op": "insert", "function": fn}


def conflate(a, b):
    return {"op": "conflate", "function": a, "with": b}


def order(a, b):
    return {"op": "order", "before": a, "after": b}


def front(fn):
    return {"op": "order-at-front", "function": fn}


def at_end(fn):
    return {"op": "order-at-end", "function": fn}


def preselect(fn, *features):
    return {"op": "preselect", "function": fn, "features": list(features)}


def classify(fn, klass):
    return {"op": "classify", "function": fn, "class": klass}


def outclassify(fn, klass):
    return {"op": "outclassify", "function": fn, "class": klass}


def lexify(fn, lexeme):
    return {"op": "lexify", "function": fn, "lexeme": lexeme}


def inquiry(name, answers, default, rules):
    return {
        "name": name,
        "parameters": ["item"],
        "answers": answers,
        "default": default,
        "rules": rules,
    }


def type_rules(answer, *types):
    return [{"param": "item", "answer": answer, "type": t} for t in types]


def attr_rule(answer, attribute, equals=None, exists=False):
    rule = {"param": "item", "answer": answer, "attribute": attribute}
    if equals is not None:
        rule["equals"] = equals
    if exists:
        rule["exists"] = True
    return rule


def chooser(name, ask, branches, bindings=None):
    return {
        "name": name,
        "tree": {
            "ask": ask,
            "bindings": bindings or {"item": []},
            "branches": branches,
        },
    }


def leaf(feature, identify=None):
    doc = {"choose": feature}
    if identify:
        doc["identify"] = identify
    return doc


def lexeme(name, spelling, classes, forms=None):
    all_forms = {"": spelling}
    all_forms.update(forms or {})
    return {"name": name, "spelling": spelling, "classes": classes, "forms": all_forms}


def verb(name, s_form, past_form, *extra_classes, base=None):
    return lexeme(
        name,
        base or name,
        ["verb", *extra_classes],
        {"present,third-singular": s_form, "past": past_form},
    )


def noun(name, animacy, plural=None, base=None):
    forms = {"plural": plural} if plural else None
    return lexeme(name, base or name, ["noun", "common-noun", animacy], forms)


# ---------------------------------------------------------------------------
# Systems (shared across languages except where a language variant applies)

SENSING_TYPES = ("see", "hear", "know", "think", "like", "love")


def mood_type(lang):
    declarative = out(
        "declarative",
        ins("Subject"),
        preselect("Subject", "nominal-group"),
        ins("Finite"),
        order("Subject", "Finite"),
        conflate("Finite", "Process"),
    )
    imperative = out("imperative", front("Process"))
    if lang == "en":
        interrogative = out(
            "interrogative",
            ins("Subject"),
            preselect("Subject", "nominal-group"),
            ins("Finite"),
            front("Finite"),
            order("Finite", "Subject"),
            order("Subject", "Process"),
            lexify("Finite", "do"),
        )
    else:  # verb-initial question, no auxiliary support
        interrogative = out(
            "interrogative",
            ins("Subject"),
            preselect("Subject", "nominal-group"),
            ins("Finite"),
            front("Finite"),
            order("Finite", "Subject"),
            conflate("Finite", "Process"),
        )
    return system(
        "MOOD-TYPE", "MOOD", "clause",
        [declarative, interrogative, imperative],
        chooser="mood-chooser",
    )


def polarity(lang):
    if lang == "en":
        negative = out(
            "negative",
            ins("Negator"),
            lexify("Negator", "never"),
            order("Subject", "Negator"),
            order("Negator", "Finite"),
        )
    else:  # negator follows the finite verb
        negative = out(
            "negative",
            ins("Negator"),
            lexify("Negator", "never"),
            order("Finite", "Negator"),
            order("Negator", "Medium"),
        )
    return system(
        "POLARITY", "MOOD", "declarative",
        [out("positive"), negative],
        chooser="polarity-chooser",
    )


def systems_for(lang):
    either = {"or": ["declarative", "interrogative"]}
    mat_or_mental = {"or": ["material", "mental"]}
    return [
        # ---- MOOD region -------------------------------------------------
        system("RANK", "MOOD", True,
               [out("clause"), out("nominal-group")], chooser="rank-chooser"),
        mood_type(lang),
        system("FINITENESS", "MOOD", either, [out("finite-clause")]),
        system("TENSE", "MOOD", "finite-clause",
               [out("present"), out("past")], chooser="tense-chooser"),
        system("TENSE-SECONDARY", "MOOD", "past", [out("simple-past")]),
        system("AGREEMENT", "MOOD", "present",
               [out("agr-third-singular"), out("agr-other")],
               chooser="agreement-chooser"),
        system("AGREEMENT-MARKING", "MOOD", "agr-third-singular",
               [out("s-marking")]),
        polarity(lang),
        system("IMPERATIVE-TYPE", "MOOD", "imperative", [out("jussive")]),
        # ---- TRANSITIVITY region ----------------------------------------
        system("TRANSITIVITY", "TRANSITIVITY", "clause",
               [
                   out("material", ins("Process"), classify("Process", "verb")),
                   out("mental", ins("Process"), classify("Process", "verb")),
               ],
               chooser="process-type-chooser"),
        system("AGENCY", "TRANSITIVITY", mat_or_mental,
               [
                   out("effective",
                       ins("Medium"),
                       preselect("Medium", "nominal-group")),
                   out("middle"),
               ],
               chooser="agency-chooser"),
        system("MENTAL-TYPE", "TRANSITIVITY", "mental",
               [
                   out("perception", classify("Process", "perception-verb")),
                   out("cognition", classify("Process", "cognition-verb")),
                   out("affection", classify("Process", "affection-verb")),
               ],
               chooser="mental-type-chooser"),
        system("MATERIAL-TYPE", "TRANSITIVITY", "material",
               [
                   out("action-process", classify("Process", "action-verb")),
                   out("motion-process", classify("Process", "motion-verb")),
               ],
               chooser="material-type-chooser"),
        system("CIRCUMSTANCE-TIME", "TRANSITIVITY", mat_or_mental,
               [
                   out("timeless"),
                   out("timed",
                       ins("TimeAdjunct"),
                       classify("TimeAdjunct", "adverb")),
               ],
               chooser="circumstance-chooser"),
        system("TIME-POSITION", "TRANSITIVITY", "timed",
               [
                   out("time-final", at_end("TimeAdjunct")),
                   out("time-initial", front("TimeAdjunct")),
               ],
               chooser="time-position-chooser"),
        system("PROCESS-VOICE", "TRANSITIVITY", "effective",
               [out("active-voice")]),
        # ---- THEME region -----------------------------------------------
        system("THEME-MARKEDNESS", "THEME", "declarative",
               [out("unmarked-theme"), out("marked-theme")],
               chooser="theme-chooser"),
        system("MARKED-THEME-TYPE", "THEME", "marked-theme",
               [
                   out("theme-medium", front("Medium")),
                   out("theme-time"),
               ],
               chooser="marked-theme-chooser"),
        system("UNMARKED-THEME-TYPE", "THEME", "unmarked-theme",
               [out("subject-theme", order("Process", "Medium"))]),
        # ---- NOMINAL-GROUP region ---------------------------------------
        system("NOMINAL-TYPE", "NOMINAL-GROUP", "nominal-group",
               [
                   out("common-thing",
                       ins("Thing"),
                       classify("Thing", "noun"),
                       classify("Thing", "common-noun"),
                       outclassify("Thing", "proper-noun"),
                       ins("Deictic"),
                       order("Deictic", "Thing")),
                   out("proper-thing",
                       ins("Thing"),
                       classify("Thing", "noun"),
                       classify("Thing", "proper-noun")),
                   out("pronoun-thing",
                       ins("Thing"),
                       classify("Thing", "pronoun")),
               ],
               chooser="nominal-type-chooser"),
        system("DETERMINATION", "NOMINAL-GROUP", "common-thing",
               [
                   out("definite", lexify("Deictic", "the")),
                   out("indefinite", lexify("Deictic", "a")),
               ],
               chooser="determination-chooser"),
        system("NOMINAL-NUMBER", "NOMINAL-GROUP", "common-thing",
               [out("singular-thing"), out("plural-thing")],
               chooser="number-chooser"),
        system("EPITHET", "NOMINAL-GROUP", "common-thing",
               [
                   out("unmodified"),
                   out("modified",
                       ins("Epithet"),
                       order("Deictic", "Epithet"),
                       order("Epithet", "Thing")),
               ],
               chooser="epithet-chooser"),
        system("EPITHET-TYPE", "NOMINAL-GROUP", "modified",
               [out("quality-epithet", classify("Epithet", "adjective"))]),
        system("THING-TYPE", "NOMINAL-GROUP", "common-thing",
               [
                   out("animate-thing", classify("Thing", "animate-noun")),
                   out("inanimate-thing", classify("Thing", "inanimate-noun")),
               ],
               chooser="thing-type-chooser"),
        system("DEICTICITY", "NOMINAL-GROUP", {"or": ["definite", "indefinite"]},
               [out("determined")]),
    ]


# ---------------------------------------------------------------------------
# Inquiries and choosers (identical for both languages)

INQUIRIES = [
    inquiry("unit-kind", ["event", "thing"], "thing",
            [attr_rule("event", "actor", exists=True)]),
    inquiry("command-query", ["command", "question", "statement"], "statement",
            [attr_rule("command", "speech-act", equals="command"),
             attr_rule("question", "speech-act", equals="question")]),
    inquiry("tense-query", ["present", "past"], "present",
            [attr_rule("past", "tense", equals="past")]),
    inquiry("multiplicity-q", ["single", "multiple"], "single",
            [attr_rule("multiple", "number", equals="plural")]),
    inquiry("polarity-query", ["positive", "negative"], "positive",
            [attr_rule("negative", "polarity", equals="negative")]),
    inquiry("process-kind", ["doing", "sensing"], "doing",
            type_rules("sensing", *SENSING_TYPES)),
    inquiry("sensing-kind", ["seeing", "knowing", "feeling"], "seeing",
            type_rules("knowing", "know", "think")
            + type_rules("feeling", "like", "love")),
    inquiry("doing-kind", ["acting", "moving"], "acting",
            type_rules("moving", "run", "walk", "sleep")),
    inquiry("participant-query", ["one", "two"], "one",
            [attr_rule("two", "actee", exists=True)]),
    inquiry("time-setting", ["unspecified", "specified"], "unspecified",
            [attr_rule("specified", "time", exists=True)]),
    inquiry("theme-query", ["default-theme", "prominent"], "default-theme",
            [attr_rule("prominent", "theme", exists=True)]),
    inquiry("theme-target", ["participant", "circumstance"], "participant",
            [attr_rule("circumstance", "theme", equals="time")]),
    inquiry("naming-query", ["classified", "named", "pronominal"], "classified",
            type_rules("named", "john", "mary")
            + type_rules("pronominal", "they", "it", "he", "she")),
    inquiry("identifiability-query", ["identifiable", "nonidentifiable"],
            "identifiable",
            [attr_rule("nonidentifiable", "identifiable", equals="no")]),
    inquiry("quality-query", ["plain", "qualified"], "plain",
            [attr_rule("qualified", "property", exists=True)]),
    inquiry("animacy-query", ["living", "nonliving"], "nonliving",
            type_rules("living", "cat", "dog", "mouse", "boy", "girl",
                       "bird", "fish")),
]

CHOOSERS = [
    chooser("rank-chooser", "unit-kind",
            {"event": leaf("clause"), "thing": leaf("nominal-group")}),
    chooser("mood-chooser", "command-query",
            {"command": leaf("imperative"),
             "question": leaf("interrogative", {"Subject": ["actor"]}),
             "statement": leaf("declarative", {"Subject": ["actor"]})}),
    chooser("tense-chooser", "tense-query",
            {"present": leaf("present"), "past": leaf("past")}),
    chooser("agreement-chooser", "multiplicity-q",
            {"single": leaf("agr-third-singular"), "multiple": leaf("agr-other")},
            bindings={"item": ["actor"]}),
    chooser("polarity-chooser", "polarity-query",
            {"positive": leaf("positive"), "negative": leaf("negative")}),
    chooser("process-type-chooser", "process-kind",
            {"doing": leaf("material"), "sensing": leaf("mental")}),
    chooser("agency-chooser", "participant-query",
            {"one": leaf("middle"),
             "two": leaf("effective", {"Medium": ["actee"]})}),
    chooser("mental-type-chooser", "sensing-kind",
            {"seeing": leaf("perception"),
             "knowing": leaf("cognition"),
             "feeling": leaf("affection")}),
    chooser("material-type-chooser", "doing-kind",
            {"acting": leaf("action-process"), "moving": leaf("motion-process")}),
    chooser("circumstance-chooser", "time-setting",
            {"unspecified": leaf("timeless"),
             "specified": leaf("timed", {"TimeAdjunct": ["time"]})}),
    chooser("time-position-chooser", "theme-target",
            {"participant": leaf("time-final"),
             "circumstance": leaf("time-initial")}),
    chooser("theme-chooser", "theme-query",
            {"default-theme": leaf("unmarked-theme"),
             "prominent": leaf("marked-theme")}),
    chooser("marked-theme-chooser", "theme-target",
            {"participant": leaf("theme-medium"),
             "circumstance": leaf("theme-time")}),
    chooser("nominal-type-chooser", "naming-query",
            {"classified": leaf("common-thing"),
             "named": leaf("proper-thing"),
             "pronominal": leaf("pronoun-thing")}),
    chooser("determination-chooser", "identifiability-query",
            {"identifiable": leaf("definite"),
             "nonidentifiable": leaf("indefinite")}),
    chooser("number-chooser", "multiplicity-q",
            {"single": leaf("singular-thing"), "multiple": leaf("plural-thing")}),
    chooser("epithet-chooser", "quality-query",
            {"plain": leaf("unmodified"),
             "qualified": leaf("modified", {"Epithet": ["property"]})}),
    chooser("thing-type-chooser", "animacy-query",
            {"living": leaf("animate-thing"),
             "nonliving": leaf("inanimate-thing")}),
]


# ---------------------------------------------------------------------------
# Lexicons

EN_LEXEMES = [
    verb("chase", "chases", "chased", "action-verb"),
    verb("eat", "eats", "ate", "action-verb"),
    verb("catch", "catches", "caught", "action-verb"),
    verb("bite", "bites", "bit", "action-verb"),
    verb("see", "sees", "saw", "perception-verb"),
    verb("hear", "hears", "heard", "perception-verb"),
    verb("know", "knows", "knew", "cognition-verb"),
    verb("think", "thinks", "thought", "cognition-verb"),
    verb("like", "likes", "liked", "affection-verb"),
    verb("love", "loves", "loved", "affection-verb"),
    verb("run", "runs", "ran", "motion-verb"),
    verb("walk", "walks", "walked", "motion-verb"),
    verb("sleep", "sleeps", "slept", "motion-verb"),
    verb("do", "does", "did", "auxiliary"),
    noun("cat", "animate-noun", "cats"),
    noun("dog", "animate-noun", "dogs"),
    noun("mouse", "animate-noun", "mice"),
    noun("boy", "animate-noun", "boys"),
    noun("girl", "animate-noun", "girls"),
    noun("bird", "animate-noun", "birds"),
    noun("fish", "animate-noun", "fish"),
    noun("house", "inanimate-noun", "houses"),
    noun("tree", "inanimate-noun", "trees"),
    noun("cheese", "inanimate-noun", "cheeses"),
    noun("ball", "inanimate-noun", "balls"),
    lexeme("john", "John", ["noun", "proper-noun"]),
    lexeme("mary", "Mary", ["noun", "proper-noun"]),
    lexeme("it", "it", ["pronoun"]),
    lexeme("he", "he", ["pronoun"]),
    lexeme("she", "she", ["pronoun"]),
    lexeme("they", "they", ["pronoun"]),
    lexeme("black", "black", ["adjective"]),
    lexeme("big", "big", ["adjective"]),
    lexeme("small", "small", ["adjective"]),
    lexeme("happy", "happy", ["adjective"]),
    lexeme("today", "today", ["adverb"]),
    lexeme("now", "now", ["adverb"]),
    lexeme("yesterday", "yesterday", ["adverb"]),
    lexeme("never", "never", ["adverb"]),
    lexeme("the", "the", ["determiner"]),
    lexeme("a", "a", ["determiner"]),
]

DE_LEXEMES = [
    verb("chase", "jagt", "jagte", "action-verb", base="jagen"),
    verb("catch", "fängt", "fing", "action-verb", base="fangen"),
    verb("see", "sieht", "sah", "perception-verb", base="sehen"),
    verb("know", "kennt", "kannte", "cognition-verb", base="kennen"),
    verb("love", "liebt", "liebte", "affection-verb", base="lieben"),
    verb("sleep", "schläft", "schlief", "motion-verb", base="schlafen"),
    noun("cat", "animate-noun", "Katzen", base="Katze"),
    noun("mouse", "animate-noun", "Mäuse", base="Maus"),
    noun("flower", "inanimate-noun", "Blumen", base="Blume"),
    lexeme("john", "John", ["noun", "proper-noun"]),
    lexeme("mary", "Mary", ["noun", "proper-noun"]),
    lexeme("black", "schwarz", ["adjective"]),
    lexeme("today", "heute", ["adverb"]),
    lexeme("never", "nie", ["adverb"]),
    lexeme("the", "die", ["determiner"]),
    lexeme("a", "eine", ["determiner"]),
]


# ---------------------------------------------------------------------------
# Morphology + punctuation (shared)

MORPHOLOGY = [
    {"name": "present", "function": "Finite", "morph": ["present"]},
    {"name": "past", "function": "Finite", "morph": ["past"]},
    {"name": "agr-third-singular", "function": "Finite", "morph": ["third-singular"]},
    {"name": "plural-thing", "function": "Thing", "morph": ["plural"]},
]

PUNCTUATION = [
    {"name": "declarative", "mark": "."},
    {"name": "interrogative", "mark": "?"},
    {"name": "imperative", "mark": "."},
]


def build_resources(lang, lexemes):
    return {
        "language-codes": [lang],
        "root-feature": "start",
        "systems": systems_for(lang),
        "lexemes": lexemes,
        "choosers": CHOOSERS,
        "inquiries": INQUIRIES,
        "morphology": MORPHOLOGY,
        "punctuation": PUNCTUATION,
    }


# ---------------------------------------------------------------------------
# Suites

EN_EXAMPLES = [
    ("chase-declarative",
     "(e / chase :actor (c / cat) :actee (m / mouse))",
     "The cat chases the mouse."),
    ("chase-question",
     "(e / chase :speech-act question :actor (c / cat) :actee (m / mouse))",
     "Does the cat chase the mouse?"),
    ("chase-past",
     "(e / chase :tense past :actor (c / cat) :actee (m / mouse))",
     "The cat chased the mouse."),
    ("chase-past-question",
     "(e / chase :speech-act question :tense past :actor (c / cat) :actee (m / mouse))",
     "Did the cat chase the mouse?"),
    ("chase-plural",
     "(e / chase :actor (c / cat :number plural) :actee (m / mouse))",
     "The cats chase the mouse."),
    ("chase-negative",
     "(e / chase :polarity negative :actor (c / cat) :actee (m / mouse))",
     "The cat never chases the mouse."),
    ("chase-imperative",
     "(e / chase :speech-act command :actor (c / cat) :actee (m / mouse))",
     "Chase the mouse."),
    ("chase-marked-theme",
     "(e / chase :theme actee :actor (c / cat) :actee (m / mouse))",
     "The mouse the cat chases."),
    ("chase-time",
     "(e / chase :actor (c / cat) :actee (m / mouse) :time (t / today))",
     "The cat chases the mouse today."),
    ("chase-time-theme",
     "(e / chase :theme time :actor (c / cat) :actee (m / mouse) :time (t / today))",
     "Today the cat chases the mouse."),
    ("see-declarative",
     "(e / see :actor (d / dog) :actee (b / bird))",
     "The dog sees the bird."),
    ("know-declarative",
     "(e / know :actor (b / boy) :actee (g / girl))",
     "The boy knows the girl."),
    ("like-pronoun",
     "(e / like :actor (p / they :number plural) :actee (b / ball))",
     "They like the ball."),
    ("love-declarative",
     "(e / love :actor (g / girl) :actee (d / dog))",
     "The girl loves the dog."),
    ("sleep-middle",
     "(e / sleep :actor (c / cat))",
     "The cat sleeps."),
    ("proper-names",
     "(e / see :actor (x / mary) :actee (y / john))",
     "Mary sees John."),
    ("epithet",
     "(e / chase :actor (c / cat :property (b / black)) :actee (m / mouse))",
     "The black cat chases the mouse."),
    ("indefinite",
     "(e / chase :actor (d / dog :identifiable no) :actee (c / cat))",
     "A dog chases the cat."),
]

DE_EXAMPLES = [
    ("de-chase-declarative",
     "(e / chase :actor (c / cat) :actee (m / mouse))",
     "Die Katze jagt die Maus."),
    ("de-chase-question",
     "(e / chase :speech-act question :actor (c / cat) :actee (m / mouse))",
     "Jagt die Katze die Maus?"),
    ("de-chase-past",
     "(e / chase :tense past :actor (c / cat) :actee (m / mouse))",
     "Die Katze jagte die Maus."),
    ("de-see",
     "(e / see :actor (c / cat) :actee (m / mouse))",
     "Die Katze sieht die Maus."),
]


def build_suite(rs, lang, cases, suite_name):
    suite = Suite(name=suite_name)
    failures = []
    for name, spl, expected in cases:
        result = generate(rs, parse_spl(spl), lang)
        if result.string != expected or not result.complete:
            failures.append(
                f"{name}: expected {expected!r}, got {result.string!r}"
                f" (status {result.status}, reason {result.reason},"
                f" warnings {[w for u in result.units.values() for w in u.warnings]})"
            )
            continue
        record_example(result, name, suite, spl=spl)
    if failures:
        raise SystemExit("fixture mismatches:\n  " + "\n  ".join(failures))
    return suite


def main():
    os.makedirs(DATA_DIR, exist_ok=True)
    for lang, lexemes, cases, stem in (
        ("en", EN_LEXEMES, EN_EXAMPLES, "toy-en"),
        ("de", DE_LEXEMES, DE_EXAMPLES, "toy-de"),
    ):
        rs = ResourceSet.from_json(build_resources(lang, lexemes))
        report = rs.validate()
        if not report.ok:
            raise SystemExit(f"{stem} does not validate:\n{report.to_json()}")
        path = os.path.join(DATA_DIR, f"{stem}.json")
        save_resources(rs, path)
        # reload from disk so recorded version hashes match file content
        from latticegen.resources import load_resources

        rs = load_resources([path])
        suite = build_suite(rs, lang, cases, stem)
        suite.save(os.path.join(DATA_DIR, f"{stem}.suite.json"))
        print(f"{stem}: {len(suite.examples)} examples recorded, "
              f"{len(rs.of_kind('system', lang))} systems")


if __name__ == "__main__":
    main()
