/** DOM shell: a new-game screen and a play screen.
 *
 * Rendering is a full redraw from one state object.  Every P/N label,
 * certificate, and option coloring shown here is echoed from service
 * responses — the client computes move *shapes* only (see state.ts).
 */

import {
  ApiClient,
  ApiError,
  type ClassifyResponse,
  type FamilyJson,
  type OptionJson,
  type SessionJson,
} from "./api.js";
import {
  type BuilderState,
  badge,
  buildCode,
  builderFromMove,
  describeMove,
  emptyBuilder,
  heapCountFor,
  moveShape,
  optionTone,
  parseCode,
  parseHeaps,
  setSplitText,
  toggleDelete,
  toggleSplit,
  truncate,
  validateMove,
} from "./state.js";

export const OPTIONS_DISPLAY_CAP = 200;

interface UiState {
  families: FamilyJson[];
  screen: "new" | "play";
  family: string;
  params: Record<string, number>;
  heapsText: string;
  humanFirst: boolean;
  preview: ClassifyResponse | null;
  previewError: string | null;
  session: SessionJson | null;
  options: OptionJson[] | null;
  optionsError: string | null;
  builder: BuilderState;
  busy: boolean;
  moveError: string | null;
  engineNote: string | null;
}

type Handler = (event: Event) => void;

interface ElProps {
  className?: string;
  text?: string;
  title?: string;
  type?: string;
  value?: string;
  placeholder?: string;
  disabled?: boolean;
  checked?: boolean;
  min?: string;
  max?: string;
  htmlFor?: string;
  id?: string;
  onClick?: Handler;
  onInput?: Handler;
  onChange?: Handler;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document, tag: K, props: ElProps = {}, ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (props.className !== undefined) node.className = props.className;
  if (props.text !== undefined) node.textContent = props.text;
  if (props.title !== undefined) node.title = props.title;
  if (props.id !== undefined) node.id = props.id;
  const input = node as unknown as HTMLInputElement;
  if (props.type !== undefined) input.type = props.type;
  if (props.value !== undefined) input.value = props.value;
  if (props.placeholder !== undefined) input.placeholder = props.placeholder;
  if (props.disabled !== undefined) input.disabled = props.disabled;
  if (props.checked !== undefined) input.checked = props.checked;
  if (props.min !== undefined) input.min = props.min;
  if (props.max !== undefined) input.max = props.max;
  if (props.htmlFor !== undefined) (node as unknown as HTMLLabelElement).htmlFor = props.htmlFor;
  if (props.onClick) node.addEventListener("click", props.onClick);
  if (props.onInput) node.addEventListener("input", props.onInput);
  if (props.onChange) node.addEventListener("change", props.onChange);
  for (const child of children) {
    node.append(child as never);
  }
  return node;
}

function errorText(err: unknown): string {
  if (err instanceof ApiError) {
    return err.reason ? `${err.message} (${err.reason})` : err.message;
  }
  return err instanceof Error ? err.message : String(err);
}

export async function mountApp(root: HTMLElement, client: ApiClient): Promise<void> {
  const doc = root.ownerDocument;
  const families = await client.rulesets();
  const first = families[0];
  if (!first) throw new Error("service reported no rulesets");

  const state: UiState = {
    families,
    screen: "new",
    family: first.family,
    params: paramsFromExample(first),
    heapsText: "",
    humanFirst: true,
    preview: null,
    previewError: null,
    session: null,
    options: null,
    optionsError: null,
    builder: emptyBuilder(),
    busy: false,
    moveError: null,
    engineNote: null,
  };
  let previewSeq = 0;

  function paramsFromExample(family: FamilyJson): Record<string, number> {
    try {
      return parseCode(family.example).params;
    } catch {
      const params: Record<string, number> = {};
      for (const [name, bound] of Object.entries(family.params)) {
        params[name] = bound.min;
      }
      return params;
    }
  }

  function currentFamily(): FamilyJson {
    return state.families.find((f) => f.family === state.family) ?? first!;
  }

  function currentCode(): string {
    return buildCode(state.family, state.params);
  }

  async function refreshPreview(): Promise<void> {
    const seq = ++previewSeq;
    const heaps = parseHeaps(state.heapsText);
    if (heaps === null) {
      state.preview = null;
      state.previewError = state.heapsText.trim()
        ? "heap sizes must be nonnegative integers" : null;
      render();
      return;
    }
    try {
      const preview = await client.classify(currentCode(), heaps);
      if (seq !== previewSeq) return;
      state.preview = preview;
      state.previewError = null;
    } catch (err) {
      if (seq !== previewSeq) return;
      state.preview = null;
      state.previewError = errorText(err);
    }
    render();
  }

  async function loadOptions(): Promise<void> {
    const session = state.session;
    if (!session) return;
    if (session.terminal) {
      state.options = [];
      state.optionsError = null;
      return;
    }
    try {
      state.options = await client.options(session.ruleset, session.heaps);
      state.optionsError = null;
    } catch (err) {
      state.options = null;
      state.optionsError = errorText(err);
    }
  }

  async function engineReply(): Promise<void> {
    const session = state.session;
    if (!session || session.status !== "in-progress" || session.turn !== "engine") {
      return;
    }
    const response = await client.engineMove(session.id);
    state.session = response.session;
    state.engineNote = response.engine_expects_loss
      ? "The engine expects to lose under perfect play; it played the first legal move."
      : null;
    await loadOptions();
  }

  async function startGame(): Promise<void> {
    const heaps = parseHeaps(state.heapsText);
    if (heaps === null || state.busy) return;
    state.busy = true;
    render();
    try {
      state.session = await client.createSession(currentCode(), heaps, state.humanFirst);
      state.screen = "play";
      state.builder = emptyBuilder();
      state.moveError = null;
      state.engineNote = null;
      await loadOptions();
      await engineReply();
    } catch (err) {
      state.previewError = errorText(err);
    } finally {
      state.busy = false;
    }
    render();
  }

  async function submitMove(): Promise<void> {
    const session = state.session;
    if (!session || state.busy) return;
    const shape = moveShape(parseCode(session.ruleset));
    const checked = validateMove(shape, session.heaps, state.builder);
    if (!checked.move) return;
    state.busy = true;
    render();
    try {
      state.session = await client.move(session.id, checked.move);
      state.builder = emptyBuilder();
      state.moveError = null;
      state.engineNote = null;
      await loadOptions();
      await engineReply();
    } catch (err) {
      state.moveError = errorText(err);
    } finally {
      state.busy = false;
    }
    render();
  }

  function backToNewGame(): void {
    state.screen = "new";
    state.session = null;
    state.options = null;
    state.optionsError = null;
    state.moveError = null;
    state.engineNote = null;
    state.builder = emptyBuilder();
    render();
    void refreshPreview();
  }

  // -------------------------------------------------------------------------
  // rendering

  function render(): void {
    root.textContent = "";
    root.append(state.screen === "new" ? renderNew() : renderPlay());
  }

  function renderBadge(analysis: { outcome: "P" | "N"; certificate: string | null; grundy?: number }): HTMLElement {
    const b = badge(analysis);
    const wrap = el(doc, "div", { className: "analysis" });
    wrap.append(el(doc, "span", {
      className: `badge badge-${b.tone}`, text: b.label, title: b.title,
    }));
    wrap.append(el(doc, "span", { className: "badge-title", text: b.title.slice(4) }));
    if (analysis.certificate) {
      wrap.append(el(doc, "span", {
        className: "certificate",
        text: `why: ${analysis.certificate}`,
        title: "condition that decided the classification",
      }));
    }
    if (analysis.grundy !== undefined) {
      wrap.append(el(doc, "span", { className: "grundy", text: `grundy ${analysis.grundy}` }));
    }
    return wrap;
  }

  function renderNew(): HTMLElement {
    const family = currentFamily();
    const spec = { family: state.family, params: state.params };
    let heapCount: number | null = null;
    try {
      heapCount = heapCountFor(spec);
    } catch {
      heapCount = null;
    }

    const screen = el(doc, "div", { className: "screen screen-new" });
    screen.append(el(doc, "h1", { text: "Delete-and-split Nim" }));
    screen.append(el(doc, "p", {
      className: "tagline",
      text: "Pick a ruleset, enter heaps, and play against a perfect engine.",
    }));

    const form = el(doc, "div", { className: "new-form" });

    const familySelect = el(doc, "select", {
      className: "family-select",
      onChange: (event) => {
        state.family = (event.target as HTMLSelectElement).value;
        state.params = paramsFromExample(currentFamily());
        render();
        void refreshPreview();
      },
    });
    for (const f of state.families) {
      const option = el(doc, "option", { text: `${f.family} — ${f.label}`, value: f.family });
      if (f.family === state.family) option.selected = true;
      familySelect.append(option);
    }
    form.append(labelled("ruleset", familySelect));

    for (const [name, bound] of Object.entries(family.params)) {
      const input = el(doc, "input", {
        className: "param-input",
        type: "number",
        value: String(state.params[name] ?? bound.min),
        min: String(bound.min),
        ...(bound.max !== undefined ? { max: String(bound.max) } : {}),
        onInput: (event) => {
          state.params[name] = Number((event.target as HTMLInputElement).value);
          void refreshPreview();
        },
      });
      form.append(labelled(
        bound.max !== undefined
          ? `${name} (${bound.min}–${bound.max})`
          : `${name} (≥ ${bound.min})`,
        input,
      ));
    }

    if (family.note) {
      form.append(el(doc, "p", { className: "family-note", text: family.note }));
    }

    const heapsInput = el(doc, "input", {
      className: "heaps-input",
      type: "text",
      value: state.heapsText,
      placeholder: heapCount !== null
        ? `${heapCount} heap sizes, e.g. ${Array.from({ length: heapCount }, (_, i) => i + 1).join(",")}`
        : "heap sizes, comma separated",
      onInput: (event) => {
        state.heapsText = (event.target as HTMLInputElement).value;
        void refreshPreview();
      },
    });
    form.append(labelled(
      heapCount !== null ? `heap sizes (${heapCount} heaps)` : "heap sizes",
      heapsInput,
    ));

    const firstBox = el(doc, "input", {
      type: "checkbox",
      id: "human-first",
      checked: state.humanFirst,
      onChange: (event) => {
        state.humanFirst = (event.target as HTMLInputElement).checked;
      },
    });
    const firstWrap = el(doc, "div", { className: "field field-check" });
    firstWrap.append(firstBox, el(doc, "label", { text: "you move first", htmlFor: "human-first" }));
    form.append(firstWrap);

    screen.append(form);

    const previewBox = el(doc, "div", { className: "preview" });
    if (state.preview) {
      previewBox.append(renderBadge(state.preview));
      if (state.preview.terminal) {
        previewBox.append(el(doc, "p", {
          className: "terminal-note",
          text: "terminal — no moves; the player to move loses",
        }));
      }
    }
    if (state.previewError) {
      previewBox.append(el(doc, "p", { className: "error", text: state.previewError }));
    }
    screen.append(previewBox);

    screen.append(el(doc, "button", {
      className: "start-button",
      text: "Start game",
      disabled: state.busy || parseHeaps(state.heapsText) === null,
      onClick: () => { void startGame(); },
    }));
    return screen;
  }

  function labelled(text: string, control: HTMLElement): HTMLElement {
    const field = el(doc, "div", { className: "field" });
    field.append(el(doc, "label", { text }), control);
    return field;
  }

  function renderPlay(): HTMLElement {
    const session = state.session;
    if (!session) return el(doc, "div");
    const humanTurn = session.status === "in-progress" && session.turn === "human";
    const shape = moveShape(parseCode(session.ruleset));
    const checked = validateMove(shape, session.heaps, state.builder);

    const screen = el(doc, "div", { className: "screen screen-play" });

    const head = el(doc, "div", { className: "play-head" });
    head.append(el(doc, "h1", { text: session.ruleset }));
    head.append(el(doc, "button", {
      className: "new-game-button", text: "New game", onClick: backToNewGame,
    }));
    screen.append(head);

    const statusText = session.status === "human_won"
      ? "You win! The engine has no reply."
      : session.status === "human_lost"
        ? "The engine wins."
        : humanTurn ? "Your move." : "Engine's turn.";
    screen.append(el(doc, "p", {
      className: `status status-${session.status}`, text: statusText,
    }));
    screen.append(renderBadge(session.analysis));
    if (state.engineNote) {
      screen.append(el(doc, "p", { className: "engine-note", text: state.engineNote }));
    }

    screen.append(renderHeaps(session, humanTurn, checked));

    if (humanTurn) {
      if (checked.problems.length > 0 && (state.builder.deleted.length > 0 || state.builder.splits.length > 0)) {
        const list = el(doc, "ul", { className: "problems" });
        for (const problem of checked.problems) {
          list.append(el(doc, "li", { text: problem }));
        }
        screen.append(list);
      }
      screen.append(el(doc, "button", {
        className: "submit-move",
        text: "Play move",
        disabled: state.busy || checked.move === null,
        onClick: () => { void submitMove(); },
      }));
    }
    if (state.moveError) {
      screen.append(el(doc, "p", { className: "error move-error", text: state.moveError }));
    }

    screen.append(renderOptions(session, humanTurn));
    screen.append(renderHistory(session));
    return screen;
  }

  function renderHeaps(
    session: SessionJson, interactive: boolean,
    checked: ReturnType<typeof validateMove>,
  ): HTMLElement {
    const row = el(doc, "div", { className: "heaps" });
    session.heaps.forEach((size, index) => {
      const isDeleted = state.builder.deleted.includes(index);
      const split = state.builder.splits.find((s) => s.index === index);
      const cell = el(doc, "div", {
        className: "heap" + (isDeleted ? " heap-deleted" : "") + (split ? " heap-split" : ""),
      });
      cell.append(el(doc, "div", {
        className: "heap-size",
        text: String(size),
        title: interactive ? "click to toggle deletion" : undefined,
        onClick: interactive ? () => {
          state.builder = toggleDelete(state.builder, index);
          render();
        } : undefined,
      }));
      if (interactive) {
        cell.append(el(doc, "button", {
          className: "split-toggle",
          text: split ? "keep whole" : "split…",
          onClick: () => {
            state.builder = toggleSplit(state.builder, index);
            render();
          },
        }));
      }
      if (split) {
        const sum = checked.sums.get(index);
        cell.append(el(doc, "input", {
          className: "split-parts",
          type: "text",
          value: split.text,
          placeholder: `${shapePartsHint(session, index)}`,
          onInput: (event) => {
            state.builder = setSplitText(
              state.builder, index, (event.target as HTMLInputElement).value);
            render();
            refocusSplit(index);
          },
        }));
        if (sum) {
          cell.append(el(doc, "span", {
            className: "split-sum " + (sum.ok ? "sum-ok" : "sum-bad"),
            text: `${sum.have ?? "…"} / ${sum.want}`,
            title: "parts entered so far / required total",
          }));
        }
      }
      row.append(cell);
    });
    return row;
  }

  function shapePartsHint(session: SessionJson, index: number): string {
    const shape = moveShape(parseCode(session.ruleset));
    const want = (session.heaps[index] ?? 0) + shape.sumOffset;
    return `${shape.partsPerSplit} parts summing to ${want}`;
  }

  function refocusSplit(index: number): void {
    const inputs = root.querySelectorAll<HTMLInputElement>(".split-parts");
    const splitPos = state.builder.splits.findIndex((s) => s.index === index);
    const input = inputs[splitPos];
    if (input) {
      const end = input.value.length;
      input.focus();
      try {
        input.setSelectionRange(end, end);
      } catch {
        // happy-dom lacks setSelectionRange; focus alone is fine there
      }
    }
  }

  function renderOptions(session: SessionJson, interactive: boolean): HTMLElement {
    const panel = el(doc, "div", { className: "options-panel" });
    const heading = el(doc, "div", { className: "options-head" });
    heading.append(el(doc, "h2", { text: "Legal moves from here" }));
    if (state.options && state.options.length > OPTIONS_DISPLAY_CAP) {
      heading.append(el(doc, "span", {
        className: "options-count",
        text: `showing first ${OPTIONS_DISPLAY_CAP} of ${state.options.length}`,
      }));
    }
    panel.append(heading);

    if (state.optionsError) {
      panel.append(el(doc, "p", { className: "error", text: state.optionsError }));
      return panel;
    }
    if (!state.options) {
      panel.append(el(doc, "p", { className: "options-empty", text: "loading…" }));
      return panel;
    }
    if (state.options.length === 0) {
      panel.append(el(doc, "p", {
        className: "options-empty",
        text: "no moves — the player to move loses",
      }));
      return panel;
    }

    const { shown } = truncate(state.options, OPTIONS_DISPLAY_CAP);
    const list = el(doc, "ul", { className: "options" });
    for (const option of shown) {
      const tone = optionTone(option);
      const item = el(doc, "li", {
        className: `option option-${tone}`,
        title: interactive ? "click to load this move into the builder" : undefined,
        onClick: interactive ? () => {
          state.builder = builderFromMove(option.move);
          state.moveError = null;
          render();
        } : undefined,
      });
      item.append(el(doc, "span", {
        className: "option-move",
        text: describeMove(option.move, session.heaps),
      }));
      item.append(el(doc, "span", {
        className: "option-result", text: `→ ${option.result.join(",")}`,
      }));
      item.append(el(doc, "span", {
        className: `option-outcome outcome-${tone}`,
        text: `opponent gets ${option.outcome}`,
      }));
      list.append(item);
    }
    panel.append(list);
    return panel;
  }

  function renderHistory(session: SessionJson): HTMLElement {
    const panel = el(doc, "div", { className: "history-panel" });
    panel.append(el(doc, "h2", { text: "History" }));
    if (session.history.length === 0) {
      panel.append(el(doc, "p", { className: "history-empty", text: "no moves yet" }));
      return panel;
    }
    const list = el(doc, "ol", { className: "history" });
    let before = session.initial;
    for (const entry of session.history) {
      list.append(el(doc, "li", {
        className: `history-entry history-${entry.by}`,
        text: `${entry.by}: ${describeMove(entry.move, before)} ⇒ ${entry.result.join(",")}`,
      }));
      before = entry.result;
    }
    panel.append(list);
    return panel;
  }

  render();
  void refreshPreview();
}
