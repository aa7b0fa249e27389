/** Render KB statements as readable logic.
 *
 * The server speaks a line-based statement language whose concept
 * expressions are s-expressions; people read description logic. This maps
 * one to the other:
 *
 *   A sub (and (not B) (some r C))   ->   A ⊑ ¬B ⊓ ∃r.C
 *   disjoint A B                     ->   A ⊓ B ⊑ ⊥
 *   clause !R(w) | P(w)              ->   ¬R(w) ∨ P(w)
 *
 * Rendering must be total: anything unparseable comes back verbatim, so a
 * server-side grammar extension degrades to plain text instead of a blank
 * screen.
 */

type Concept =
  | { kind: "atom"; name: string }
  | { kind: "top" }
  | { kind: "bot" }
  | { kind: "not"; arg: Concept }
  | { kind: "and" | "or"; args: Concept[] }
  | { kind: "some" | "all"; role: string; arg: Concept };

function tokenize(text: string): string[] {
  return text
    .replace(/\(/g, " ( ")
    .replace(/\)/g, " ) ")
    .trim()
    .split(/\s+/)
    .filter((t) => t.length > 0);
}

class TokenStream {
  private pos = 0;
  constructor(private tokens: string[]) {}

  peek(): string | undefined {
    return this.tokens[this.pos];
  }

  next(): string {
    const tok = this.tokens[this.pos++];
    if (tok === undefined) throw new Error("unexpected end of expression");
    return tok;
  }

  atEnd(): boolean {
    return this.pos >= this.tokens.length;
  }
}

function parseConcept(ts: TokenStream): Concept {
  const tok = ts.next();
  if (tok === ")") throw new Error("unexpected ')'");
  if (tok !== "(") {
    if (tok === "top") return { kind: "top" };
    if (tok === "bot") return { kind: "bot" };
    return { kind: "atom", name: tok };
  }
  const op = ts.next();
  if (op === "not") {
    const arg = parseConcept(ts);
    expect(ts, ")");
    return { kind: "not", arg };
  }
  if (op === "and" || op === "or") {
    const args: Concept[] = [];
    while (ts.peek() !== ")") args.push(parseConcept(ts));
    expect(ts, ")");
    if (args.length === 0) throw new Error(`empty ${op}`);
    return { kind: op, args };
  }
  if (op === "some" || op === "all") {
    const role = ts.next();
    if (role === "(" || role === ")") throw new Error("role name expected");
    const arg = parseConcept(ts);
    expect(ts, ")");
    return { kind: op, role, arg };
  }
  throw new Error(`unknown operator ${op}`);
}

function expect(ts: TokenStream, tok: string): void {
  const got = ts.next();
  if (got !== tok) throw new Error(`expected '${tok}', got '${got}'`);
}

/** Parenthesize ⊓/⊔ members and quantifier/negation arguments only when
 * the glyph string would otherwise be ambiguous. */
function glyph(c: Concept): string {
  switch (c.kind) {
    case "atom":
      return c.name;
    case "top":
      return "⊤";
    case "bot":
      return "⊥";
    case "not":
      return `¬${wrapped(c.arg)}`;
    case "and":
    case "or": {
      const sep = c.kind === "and" ? " ⊓ " : " ⊔ ";
      return c.args
        .map((a) => (a.kind === "and" || a.kind === "or" ? `(${glyph(a)})` : glyph(a)))
        .join(sep);
    }
    case "some":
    case "all": {
      const q = c.kind === "some" ? "∃" : "∀";
      return `${q}${c.role}.${wrapped(c.arg)}`;
    }
  }
}

function wrapped(c: Concept): string {
  return c.kind === "and" || c.kind === "or" ? `(${glyph(c)})` : glyph(c);
}

function conceptFrom(ts: TokenStream): string {
  return glyph(parseConcept(ts));
}

/** Index of an infix keyword at parenthesis depth 0, or -1. */
function topLevelIndex(tokens: string[], keyword: string): number {
  let depth = 0;
  for (let i = 0; i < tokens.length; i++) {
    const t = tokens[i];
    if (t === "(") depth++;
    else if (t === ")") depth--;
    else if (t === keyword && depth === 0) return i;
  }
  return -1;
}

function renderSides(tokens: string[], at: number, sep: string): string {
  const left = new TokenStream(tokens.slice(0, at));
  const right = new TokenStream(tokens.slice(at + 1));
  const l = conceptFrom(left);
  if (!left.atEnd()) throw new Error("trailing tokens on the left");
  const r = conceptFrom(right);
  if (!right.atEnd()) throw new Error("trailing tokens on the right");
  return `${l} ${sep} ${r}`;
}

const ASSERTION = /^([A-Za-z_][\w'-]*)\(\s*([^,()\s]+)\s*(?:,\s*([^,()\s]+)\s*)?\)$/;

function renderLiteral(literal: string): string {
  const negated = literal.startsWith("!");
  const body = negated ? literal.slice(1) : literal;
  const m = ASSERTION.exec(body.trim());
  const rendered = m
    ? m[3] !== undefined
      ? `${m[1]}(${m[2]}, ${m[3]})`
      : `${m[1]}(${m[2]})`
    : body.trim();
  return negated ? `¬${rendered}` : rendered;
}

/** One statement line -> display string. Total: falls back to the input. */
export function renderStatement(text: string): string {
  const line = text.trim();
  try {
    if (line.startsWith("clause ")) {
      return line
        .slice("clause ".length)
        .split("|")
        .map((lit) => renderLiteral(lit.trim()))
        .join(" ∨ ");
    }
    if (line.startsWith("disjoint ")) {
      const ts = new TokenStream(tokenize(line.slice("disjoint ".length)));
      const first = conceptFrom(ts);
      const second = conceptFrom(ts);
      if (!ts.atEnd()) throw new Error("trailing tokens");
      return `${first} ⊓ ${second} ⊑ ⊥`;
    }
    const tokens = tokenize(line);
    const subAt = topLevelIndex(tokens, "sub");
    if (subAt >= 0) return renderSides(tokens, subAt, "⊑");
    const equivAt = topLevelIndex(tokens, "equiv");
    if (equivAt >= 0) return renderSides(tokens, equivAt, "≡");
    const asserted = ASSERTION.exec(line);
    if (asserted) return renderLiteral(line);
    return line;
  } catch {
    return line;
  }
}

export function renderFormulas(texts: readonly string[]): string[] {
  return texts.map(renderStatement);
}
