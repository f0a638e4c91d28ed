/** Pure client-side state: ruleset arithmetic, the move builder, and small
 * presentation helpers.
 *
 * The only game knowledge embedded here is *shape* — how many heaps a
 * ruleset has and what a well-formed move looks like (arity, part counts,
 * part sums, positivity) — so the UI can assemble moves and catch typos
 * before a round-trip.  Outcomes, certificates, and legality verdicts all
 * come from the service; nothing in this module decides who is winning.
 */

import type { AnalysisJson, MoveJson, OptionJson } from "./api.js";

// ---------------------------------------------------------------------------
// ruleset codes and shapes

export interface RulesetSpec {
  family: string;
  params: Record<string, number>;
}

const PARAM_ORDER: Record<string, string[]> = {
  "delete-nim": [],
  vdn: [],
  abo: ["n"],
  nmth: ["n"],
  half: ["m"],
  kfrac: ["k", "m"],
  single: ["n"],
};

export function buildCode(family: string, params: Record<string, number>): string {
  const order = PARAM_ORDER[family];
  if (!order) throw new Error(`unknown family ${family}`);
  if (order.length === 0) return family;
  return `${family}:${order.map((name) => params[name]).join(",")}`;
}

export function parseCode(code: string): RulesetSpec {
  const [family = "", rest] = code.split(":", 2);
  const order = PARAM_ORDER[family];
  if (!order) throw new Error(`unknown family ${family}`);
  const values = rest === undefined ? [] : rest.split(",").map(Number);
  if (values.length !== order.length || values.some((v) => !Number.isInteger(v))) {
    throw new Error(`bad parameters in ${code}`);
  }
  const params: Record<string, number> = {};
  order.forEach((name, i) => { params[name] = values[i]!; });
  return { family, params };
}

export function heapCountFor(spec: RulesetSpec): number {
  switch (spec.family) {
    case "delete-nim":
    case "vdn":
      return 2;
    case "abo":
    case "nmth":
    case "single":
      return spec.params.n!;
    case "half":
      return 2 * spec.params.m!;
    case "kfrac":
      return spec.params.k! * spec.params.m!;
    default:
      throw new Error(`unknown family ${spec.family}`);
  }
}

/** What a structurally well-formed move looks like for one ruleset. */
export interface MoveShape {
  heapCount: number;
  /** smallest legal heap size (delete-nim allows empty heaps) */
  minHeap: number;
  /** how many heaps a move deletes; min < max only for nmth (the chosen k) */
  deletions: { min: number; max: number };
  /** how many heaps must be split, given how many were deleted */
  splitsForDeletions: (deleted: number) => number;
  /** every split produces exactly this many parts */
  partsPerSplit: number;
  /** smallest allowed part (delete-nim allows empty parts) */
  minPart: number;
  /** parts of a split of heap h must sum to h + sumOffset */
  sumOffset: number;
}

export function moveShape(spec: RulesetSpec): MoveShape {
  const n = spec.params.n;
  const m = spec.params.m;
  const k = spec.params.k;
  switch (spec.family) {
    case "delete-nim":
      return {
        heapCount: 2, minHeap: 0,
        deletions: { min: 1, max: 1 },
        splitsForDeletions: () => 1,
        partsPerSplit: 2, minPart: 0, sumOffset: -1,
      };
    case "vdn":
      return {
        heapCount: 2, minHeap: 1,
        deletions: { min: 1, max: 1 },
        splitsForDeletions: () => 1,
        partsPerSplit: 2, minPart: 1, sumOffset: 0,
      };
    case "abo":
      return {
        heapCount: n!, minHeap: 1,
        deletions: { min: n! - 1, max: n! - 1 },
        splitsForDeletions: () => 1,
        partsPerSplit: n!, minPart: 1, sumOffset: 0,
      };
    case "nmth":
      return {
        heapCount: n!, minHeap: 1,
        deletions: { min: 1, max: Math.floor(n! / 2) },
        splitsForDeletions: (deleted) => deleted,
        partsPerSplit: 2, minPart: 1, sumOffset: 0,
      };
    case "half":
      return {
        heapCount: 2 * m!, minHeap: 1,
        deletions: { min: m!, max: m! },
        splitsForDeletions: () => m!,
        partsPerSplit: 2, minPart: 1, sumOffset: 0,
      };
    case "kfrac":
      return {
        heapCount: k! * m!, minHeap: 1,
        deletions: { min: (k! - 1) * m!, max: (k! - 1) * m! },
        splitsForDeletions: () => m!,
        partsPerSplit: k!, minPart: 1, sumOffset: 0,
      };
    case "single":
      return {
        heapCount: n!, minHeap: 1,
        deletions: { min: 1, max: 1 },
        splitsForDeletions: () => 1,
        partsPerSplit: 2, minPart: 1, sumOffset: 0,
      };
    default:
      throw new Error(`unknown family ${spec.family}`);
  }
}

// ---------------------------------------------------------------------------
// heaps input

/** Parse a heap list like "2, 3 5"; null when anything is not a number. */
export function parseHeaps(text: string): number[] | null {
  const pieces = text.split(/[\s,;]+/).filter((piece) => piece.length > 0);
  if (pieces.length === 0) return null;
  const heaps = pieces.map(Number);
  return heaps.every((h) => Number.isInteger(h) && h >= 0) ? heaps : null;
}

// ---------------------------------------------------------------------------
// move builder

export interface SplitBuffer {
  index: number;
  text: string;
}

export interface BuilderState {
  /** heap indices marked for deletion, ascending */
  deleted: number[];
  /** split part-entry buffers, ascending by heap index */
  splits: SplitBuffer[];
}

export function emptyBuilder(): BuilderState {
  return { deleted: [], splits: [] };
}

export function toggleDelete(b: BuilderState, index: number): BuilderState {
  if (b.deleted.includes(index)) {
    return { ...b, deleted: b.deleted.filter((i) => i !== index) };
  }
  return {
    deleted: [...b.deleted, index].sort((x, y) => x - y),
    splits: b.splits.filter((s) => s.index !== index),
  };
}

export function toggleSplit(b: BuilderState, index: number): BuilderState {
  if (b.splits.some((s) => s.index === index)) {
    return { ...b, splits: b.splits.filter((s) => s.index !== index) };
  }
  return {
    deleted: b.deleted.filter((i) => i !== index),
    splits: [...b.splits, { index, text: "" }].sort((x, y) => x.index - y.index),
  };
}

export function setSplitText(b: BuilderState, index: number, text: string): BuilderState {
  return {
    ...b,
    splits: b.splits.map((s) => (s.index === index ? { index, text } : s)),
  };
}

/** Prefill the builder from a move the options panel suggested. */
export function builderFromMove(move: MoveJson): BuilderState {
  return {
    deleted: [...move.deleted].sort((x, y) => x - y),
    splits: move.splits
      .map((s) => ({ index: s.index, text: s.parts.join(",") }))
      .sort((x, y) => x.index - y.index),
  };
}

/** Parse one split buffer: comma/space/plus-separated nonnegative integers. */
export function parseParts(text: string): number[] | null {
  const pieces = text.split(/[\s,+]+/).filter((piece) => piece.length > 0);
  if (pieces.length === 0) return null;
  const parts = pieces.map(Number);
  return parts.every((p) => Number.isInteger(p) && p >= 0) ? parts : null;
}

export interface SplitCheck {
  have: number | null;
  want: number;
  ok: boolean;
}

export interface MoveValidation {
  move: MoveJson | null;
  problems: string[];
  /** per split index: parsed sum vs required sum, for the live indicator */
  sums: Map<number, SplitCheck>;
}

/** Structural validation only — arity, part counts, sums, positivity.
 * A move that passes here can still be refused by the server, which stays
 * the authority on legality. */
export function validateMove(
  shape: MoveShape, heaps: number[], b: BuilderState,
): MoveValidation {
  const problems: string[] = [];
  const sums = new Map<number, SplitCheck>();

  const { min, max } = shape.deletions;
  if (b.deleted.length < min || b.deleted.length > max) {
    problems.push(min === max
      ? `select exactly ${min} heap${min === 1 ? "" : "s"} to delete (${b.deleted.length} selected)`
      : `select between ${min} and ${max} heaps to delete (${b.deleted.length} selected)`);
  }

  const wantSplits = shape.splitsForDeletions(b.deleted.length);
  if (b.splits.length !== wantSplits) {
    problems.push(`select exactly ${wantSplits} heap${wantSplits === 1 ? "" : "s"} to split (${b.splits.length} selected)`);
  }

  for (const split of b.splits) {
    const heap = heaps[split.index];
    if (heap === undefined) {
      problems.push(`heap #${split.index + 1} does not exist`);
      continue;
    }
    const want = heap + shape.sumOffset;
    const parts = parseParts(split.text);
    if (parts === null) {
      sums.set(split.index, { have: null, want, ok: false });
      problems.push(`enter the parts for heap #${split.index + 1}`);
      continue;
    }
    const have = parts.reduce((acc, p) => acc + p, 0);
    let ok = true;
    if (parts.length !== shape.partsPerSplit) {
      problems.push(`heap #${split.index + 1} must split into exactly ${shape.partsPerSplit} parts (got ${parts.length})`);
      ok = false;
    }
    if (parts.some((p) => p < shape.minPart)) {
      problems.push(`parts of heap #${split.index + 1} must all be at least ${shape.minPart}`);
      ok = false;
    }
    if (want < 0) {
      problems.push(`heap #${split.index + 1} is empty and cannot be kept`);
      ok = false;
    } else if (have !== want) {
      problems.push(`parts of heap #${split.index + 1} sum to ${have}, need ${want}`);
      ok = false;
    }
    sums.set(split.index, { have, want, ok });
  }

  if (problems.length > 0) {
    return { move: null, problems, sums };
  }
  return {
    move: {
      deleted: [...b.deleted],
      splits: b.splits.map((s) => ({ index: s.index, parts: parseParts(s.text)! })),
    },
    problems,
    sums,
  };
}

// ---------------------------------------------------------------------------
// presentation helpers (all driven by server data)

export interface Badge {
  label: "P" | "N";
  tone: "p" | "n";
  title: string;
}

export function badge(analysis: AnalysisJson): Badge {
  return analysis.outcome === "P"
    ? { label: "P", tone: "p", title: "P — the player to move loses with best play" }
    : { label: "N", tone: "n", title: "N — the player to move wins with best play" };
}

/** Human-readable move text, sized against the pre-move heaps. */
export function describeMove(move: MoveJson, heapsBefore: number[]): string {
  const deleted = move.deleted.map((i) => heapsBefore[i] ?? "?").join(", ");
  const splits = move.splits
    .map((s) => `${heapsBefore[s.index] ?? "?"} → ${s.parts.join("+")}`)
    .join("; ");
  if (move.splits.length === 0) return `delete ${deleted}`;
  return `delete ${deleted} · split ${splits}`;
}

/** An option whose successor is P hands the opponent a losing position. */
export function optionTone(option: OptionJson): "good" | "bad" {
  return option.outcome === "P" ? "good" : "bad";
}

export function truncate<T>(items: T[], cap: number): { shown: T[]; total: number } {
  return { shown: items.slice(0, cap), total: items.length };
}

// ---------------------------------------------------------------------------
// deterministic RNG for the random-agent playouts

/** mulberry32: tiny seeded PRNG, plenty for shuffling test playouts. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function pickRandom<T>(rng: () => number, items: T[]): T {
  if (items.length === 0) throw new Error("cannot pick from an empty list");
  return items[Math.floor(rng() * items.length)]!;
}
