#!/usr/bin/env python3
"""
Relational verifier command logic
Loads documents, runs the requested command and builds response dictionaries
"""

import json
import logging
from typing import Any, Dict, List, Optional, Tuple

from .config import CliConfig, VerifierConfig
from .document import Document, load_document
from .errors import DocumentError, VerifierError
from .flow import first_violation, is_triple, sp, wlp
from .gcl import compile_program, verify
from .relmat import Mat
from .subtype import Comonoid, closure

# Setup logging (stderr, so command output on stdout stays deterministic)
logging.basicConfig(
    level=getattr(logging, VerifierConfig.get_log_level(), logging.WARNING),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('relverify')


def matrix_payload(m: Mat) -> Dict[str, Any]:
    return {
        "src": m.src.name,
        "dst": m.dst.name,
        "rows": list(m.src.labels),
        "cols": list(m.dst.labels),
        "entries": [[m.q.to_json(a) for a in row] for row in m.entries],
    }


def predicate_payload(u: Comonoid) -> Dict[str, Any]:
    """Boolean predicates carry their member list; every predicate carries its diagonal."""
    payload = {
        "type": u.typ.name,
        "labels": list(u.typ.labels),
        "diag": [u.q.to_json(e) for e in u.diag],
    }
    if u.q.kind == "boolean":
        payload["members"] = u.members()
    return payload


class CommandLogic:
    """Handlers for the verifier subcommands"""

    def log_command_details(self, command: str, args: Dict[str, Any]):
        logger.info(f"Command: {command}")
        logger.info(f"Command arguments: {args}")

    def _target_matrix(self, doc: Document, name: str) -> Mat:
        """A program compiles to its matrix; a matrix name stands for itself."""
        if name in doc.programs:
            return compile_program(doc.programs[name], doc.env)
        if name in doc.matrices:
            return doc.matrices[name]
        raise DocumentError(name, "no program or matrix with this name")

    def _predicate(self, doc: Document, name: str) -> Comonoid:
        if name not in doc.predicates:
            raise DocumentError(name, "no predicate with this name")
        return doc.predicates[name]

    def handle_check(self, doc: Document) -> Tuple[int, Dict[str, Any]]:
        results = []
        for assertion in doc.assertions:
            if assertion.prog is not None:
                verdict = verify(assertion.pre, doc.programs[assertion.prog], assertion.post, doc.env)
                holds, counterexample = verdict.holds, verdict.counterexample
            else:
                term = doc.matrices[assertion.term]
                pre, post = doc.predicates[assertion.pre], doc.predicates[assertion.post]
                holds = is_triple(pre, term, post)
                counterexample = None
                if not holds:
                    y, _x = first_violation(pre, term, post)
                    counterexample = term.src.labels[y]
            logger.info(f"{'HOLDS' if holds else 'FAILS'} {assertion.name}")
            results.append({"name": assertion.name, "holds": holds, "counterexample": counterexample})
        all_hold = all(r["holds"] for r in results)
        code = CliConfig.EXIT_HOLDS if all_hold else CliConfig.EXIT_FAILS
        return code, {"result": "success", "command": "check", "holds": all_hold, "assertions": results}

    def handle_transformer(self, doc: Document, command: str, target: str, pred: str) -> Tuple[int, Dict[str, Any]]:
        r = self._target_matrix(doc, target)
        u = self._predicate(doc, pred)
        result = sp(r, u) if command == "sp" else wlp(r, u)
        return self.create_success_response(command, target=target, predicate=predicate_payload(result))

    def handle_star(self, doc: Document, target: str) -> Tuple[int, Dict[str, Any]]:
        if target not in doc.matrices:
            raise DocumentError(target, "no matrix with this name")
        return self.create_success_response("star", target=target, matrix=matrix_payload(closure(doc.matrices[target]).mat))

    def handle_dump(self, doc: Document, target: str) -> Tuple[int, Dict[str, Any]]:
        if target not in doc.matrices:
            raise DocumentError(target, "no matrix with this name")
        return self.create_success_response("dump", target=target, matrix=matrix_payload(doc.matrices[target]))

    def handle_compile(self, doc: Document, target: str) -> Tuple[int, Dict[str, Any]]:
        if target not in doc.programs:
            raise DocumentError(target, "no program with this name")
        m = compile_program(doc.programs[target], doc.env)
        return self.create_success_response("compile", target=target, matrix=matrix_payload(m))

    def create_error_response(self, message: str, key: Optional[str] = None) -> Tuple[int, Dict[str, Any]]:
        """Create standardized error response"""
        response = {"result": "error", "message": message}
        if key is not None:
            response["key"] = key
        return CliConfig.EXIT_ERROR, response

    def create_success_response(self, command: str, **data: Any) -> Tuple[int, Dict[str, Any]]:
        return CliConfig.EXIT_HOLDS, {"result": "success", "command": command, **data}

    def process_command(self, command: str, args: Dict[str, Any]) -> Tuple[int, Dict[str, Any]]:
        """
        Main command processing logic
        Returns (exit_code, response_data)
        """
        try:
            self.log_command_details(command, args)

            if command not in CliConfig.COMMANDS:
                return self.create_error_response(f"Unknown command: {command}")

            doc = load_document(args["document"], args.get("quantale"))

            if command == "check":
                return self.handle_check(doc)
            if command in ("sp", "wlp"):
                return self.handle_transformer(doc, command, args["target"], args["predicate"])
            if command == "star":
                return self.handle_star(doc, args["target"])
            if command == "dump":
                return self.handle_dump(doc, args["target"])
            return self.handle_compile(doc, args["target"])

        except DocumentError as e:
            logger.error(f"Document error at {e.key}: {e.message}")
            return self.create_error_response(e.message, e.key)
        except VerifierError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return self.create_error_response(f"{type(e).__name__}: {e}")
        except Exception as e:
            logger.error(f"Error processing command: {e}")
            return self.create_error_response("Internal error")


def _cell(value: Any) -> str:
    if isinstance(value, list):
        return "{" + ", ".join(json.dumps(w) for w in value) + "}"
    return str(value)


def _render_matrix(payload: Dict[str, Any]) -> List[str]:
    header = [""] + payload["cols"]
    body = [[label] + [_cell(a) for a in row] for label, row in zip(payload["rows"], payload["entries"])]
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    lines = [f"{payload['src']} -> {payload['dst']}"]
    for line in [header] + body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
    return lines


def _render_predicate(payload: Dict[str, Any]) -> str:
    if "members" in payload:
        return "{" + ", ".join(payload["members"]) + "}"
    return "[" + ", ".join(f"{label}: {_cell(e)}" for label, e in zip(payload["labels"], payload["diag"])) + "]"


def render_response(response: Dict[str, Any], as_json: bool = False) -> str:
    """Text (or canonical JSON) form of a response; identical responses render identically."""
    if as_json:
        return json.dumps(response, sort_keys=True)
    if response.get("result") == "error":
        key = response.get("key")
        return f"error: {key}: {response['message']}" if key else f"error: {response['message']}"
    command = response["command"]
    if command == "check":
        lines = []
        for r in response["assertions"]:
            if r["holds"]:
                lines.append(f"HOLDS {r['name']}")
            else:
                lines.append(f"FAILS {r['name']} counterexample: {r['counterexample']}")
        return "\n".join(lines)
    if command in ("sp", "wlp"):
        return _render_predicate(response["predicate"])
    return "\n".join(_render_matrix(response["matrix"]))


# Global instance for use by the command-line entry point
command_logic = CommandLogic()


def handle_command(command: str, args: Dict[str, Any]) -> Tuple[int, Dict[str, Any]]:
    """
    Main entry point for running a verifier command
    Returns (exit_code, response_data)
    """
    return command_logic.process_command(command, args)
