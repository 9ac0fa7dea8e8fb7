"""Reference tokenization for data/tokenize/paragraph.txt.

Independent of the Rust tokenizer: lowercases, then keeps maximal runs of
Unicode letters/digits (regex word characters minus underscore).
"""
import json
import re

text = open("tokenize/paragraph.txt", encoding="utf-8").read()
tokens = re.findall(r"[^\W_]+", text.lower())
with open("tokenize/paragraph.tokens.json", "w", encoding="utf-8") as f:
    f.write(json.dumps(tokens, ensure_ascii=False, indent=0) + "\n")
