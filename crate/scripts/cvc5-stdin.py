#!/usr/bin/env python3
"""Run SMT-LIB 2 commands read from standard input with the cvc5 Python API.

Acts as a minimal command-line cvc5 for environments where only the Python
wheel is installed. Commands are executed as soon as their parentheses
balance, so the script also works as an interactive session backend.
"""
import sys

import cvc5


def balanced(text: str) -> bool:
    depth = 0
    in_str = in_sym = in_comment = False
    seen = False
    for ch in text:
        if in_comment:
            in_comment = ch != "\n"
        elif in_str:
            in_str = ch != '"'
        elif in_sym:
            in_sym = ch != "|"
        elif ch == ";":
            in_comment = True
        elif ch == '"':
            in_str = True
        elif ch == "|":
            in_sym = True
        elif ch == "(":
            depth += 1
            seen = True
        elif ch == ")":
            depth -= 1
    return seen and depth == 0


def main() -> int:
    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    solver.setOption("produce-models", "true")
    sm = cvc5.SymbolManager(tm)
    pending = ""
    for line in sys.stdin:
        pending += line
        if not balanced(pending):
            continue
        parser = cvc5.InputParser(solver, sm)
        parser.setStringInput(cvc5.InputLanguage.SMT_LIB_2_6, pending, "stdin")
        pending = ""
        while True:
            try:
                cmd = parser.nextCommand()
            except RuntimeError as err:
                msg = str(err).replace('"', "'")
                print(f'(error "{msg}")', flush=True)
                return 1
            if cmd.isNull():
                break
            if str(cmd).strip().startswith("(exit"):
                return 0
            out = cmd.invoke(solver, sm)
            if out:
                sys.stdout.write(out if out.endswith("\n") else out + "\n")
                sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
