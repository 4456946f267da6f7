/**
 * Annotation workbench: sentence display with right-to-left token
 * spans, frame picker with definitions and English exemplars, layered
 * label view with visibility toggles, auto-fill review, validation,
 * and rule mining.
 *
 * All mutations go through the HTTP API; the view always reflects the
 * last server-acknowledged annotation set, so after any successful
 * request the local state equals a fresh GET. A stale revision (409)
 * opens the conflict dialog; a network failure shows a retry banner
 * without losing state.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  AsetPayload,
  FramePayload,
  LabelPayload,
  LayerName,
  SentencePayload,
  ViolationPayload,
} from "./types.js";
import { LAYERS } from "./types.js";

export interface ViewState {
  sentenceIds: string[];
  sentence: SentencePayload | null;
  aset: AsetPayload | null;
  suggestions: FramePayload[];
  frame: FramePayload | null;
  pendingTarget: number | null;
  selection: { start: number; end: number } | null;
  pendingSegment: number | null;
  layerVisible: Record<LayerName, boolean>;
  violations: ViolationPayload[];
  rulesXml: string;
  /** layer|anchor keys whose values were entered by the user this session */
  humanEntered: Set<string>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function anchorKey(label: LabelPayload): string {
  if (label.segref !== undefined) return `seg:${label.segref}`;
  if (label.itype !== undefined) return `null:${label.value}`;
  return `${label.start}-${label.end}`;
}

export class AnnotatorApp {
  state: ViewState = {
    sentenceIds: [],
    sentence: null,
    aset: null,
    suggestions: [],
    frame: null,
    pendingTarget: null,
    selection: null,
    pendingSegment: null,
    layerVisible: { Target: true, FE: true, GF: true, PT: true, Sumo: true },
    violations: [],
    rulesXml: "",
    humanEntered: new Set(),
  };

  private queue: Promise<void> = Promise.resolve();
  private dragging = false;
  private dragStart = -1;

  constructor(
    private root: HTMLElement,
    readonly api: ApiClient,
  ) {
    this.buildSkeleton();
  }

  /** Resolves when every queued action has settled (test hook). */
  flush(): Promise<void> {
    return this.queue;
  }

  private run(task: () => Promise<void>): void {
    this.queue = this.queue.then(async () => {
      try {
        await task();
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          this.showConflictDialog();
        } else if (err instanceof ApiError) {
          this.state.violations = err
            .violations()
            .map((message) => ({ kind: `HTTP ${err.status}`, message }));
        } else {
          this.showRetryBanner(String(err), task);
        }
      }
      this.render();
    });
  }

  start(): Promise<void> {
    this.run(async () => {
      const corpora = await this.api.corpora();
      this.state.sentenceIds = corpora.flatMap((c) => c.sentences);
    });
    return this.flush();
  }

  // -- actions ---------------------------------------------------------------

  openSentence(sentenceId: string): void {
    this.run(async () => {
      const sentence = await this.api.sentence(sentenceId);
      this.state.sentence = sentence;
      this.state.aset = null;
      this.state.frame = null;
      this.state.suggestions = [];
      this.state.pendingTarget = null;
      this.state.selection = null;
      this.state.pendingSegment = null;
      this.state.violations = [];
      this.state.rulesXml = "";
      this.state.humanEntered = new Set();
    });
  }

  pickTarget(tokenIndex: number): void {
    this.run(async () => {
      const sentence = this.state.sentence;
      if (!sentence) return;
      const token = sentence.tokens[tokenIndex];
      if (!token) return;
      this.state.pendingTarget = tokenIndex;
      this.state.suggestions = await this.api.frames(token.lemma);
    });
  }

  pickFrame(name: string): void {
    this.run(async () => {
      const sentence = this.state.sentence;
      const targetIndex = this.state.pendingTarget;
      if (!sentence || targetIndex === null) return;
      const token = sentence.tokens[targetIndex];
      if (!token) return;
      this.state.frame =
        this.state.suggestions.find((f) => f.name === name) ??
        (await this.api.frames(token.lemma)).find((f) => f.name === name) ??
        null;
      this.state.aset = await this.api.createAset(sentence.sentence_id, token.span, name);
      this.state.violations = [];
    });
  }

  /** Assign a frame element to the current span or segment choice. */
  assignFE(fe: string): void {
    this.run(async () => {
      const { sentence, aset, selection, pendingSegment } = this.state;
      if (!sentence || !aset) return;
      if (pendingSegment !== null) {
        const target = sentence.tokens.find(
          (t) => t.span[0] === this.targetSpan()?.[0] && t.span[1] === this.targetSpan()?.[1],
        );
        if (!target) return;
        const segref = `${target.token_id}#${pendingSegment}`;
        this.state.aset = await this.api.patchLabel(aset.aset_id, {
          revision: aset.revision,
          layer: "FE",
          segref,
          value: fe,
        });
        this.state.humanEntered.add(`FE|seg:${segref}`);
        this.state.pendingSegment = null;
        return;
      }
      if (!selection) return;
      const span = this.charSpan(selection.start, selection.end);
      this.state.aset = await this.api.patchLabel(aset.aset_id, {
        revision: aset.revision,
        layer: "FE",
        span,
        value: fe,
      });
      this.state.humanEntered.add(`FE|${span[0]}-${span[1]}`);
      this.state.selection = null;
    });
  }

  markNullInstantiated(fe: string, itype = "INI"): void {
    this.run(async () => {
      const aset = this.state.aset;
      if (!aset) return;
      this.state.aset = await this.api.patchLabel(aset.aset_id, {
        revision: aset.revision,
        layer: "FE",
        itype,
        value: fe,
      });
      this.state.humanEntered.add(`FE|null:${fe}`);
    });
  }

  runAutofill(): void {
    this.run(async () => {
      const aset = this.state.aset;
      if (!aset) return;
      this.state.aset = await this.api.autofill(aset.aset_id, aset.revision);
    });
  }

  runValidate(): void {
    this.run(async () => {
      const aset = this.state.aset;
      if (!aset) return;
      const verdict = await this.api.validate(aset.aset_id);
      this.state.violations = verdict.violations;
      this.state.aset = await this.api.aset(aset.aset_id);
    });
  }

  runMine(): void {
    this.run(async () => {
      const aset = this.state.aset;
      if (!aset) return;
      this.state.rulesXml = await this.api.rules(aset.lu_id);
    });
  }

  markReviewed(): void {
    this.run(async () => {
      const aset = this.state.aset;
      if (!aset) return;
      const target = aset.layers.Target?.[0];
      if (!target || target.start === undefined || target.end === undefined) return;
      this.state.aset = await this.api.patchLabel(aset.aset_id, {
        revision: aset.revision,
        layer: "Target",
        span: [target.start, target.end],
        value: target.value,
        status: "human-verified",
      });
    });
  }

  /** Conflict dialog action: drop local view, re-read the server state. */
  reloadAset(): void {
    this.run(async () => {
      const aset = this.state.aset;
      if (!aset) return;
      this.state.aset = await this.api.aset(aset.aset_id);
      this.hideConflictDialog();
    });
  }

  toggleLayer(layer: LayerName): void {
    this.state.layerVisible[layer] = !this.state.layerVisible[layer];
    this.render();
  }

  pickSegment(index: number): void {
    this.state.pendingSegment = index;
    this.state.selection = null;
    this.render();
  }

  // -- helpers ---------------------------------------------------------------

  private targetSpan(): [number, number] | null {
    const target = this.state.aset?.layers.Target?.[0];
    if (!target || target.start === undefined || target.end === undefined) return null;
    return [target.start, target.end];
  }

  private charSpan(startToken: number, endToken: number): [number, number] {
    const tokens = this.state.sentence?.tokens ?? [];
    const first = tokens[startToken];
    const last = tokens[endToken];
    if (!first || !last) throw new Error("selection outside tokens");
    return [first.span[0], last.span[1]];
  }

  private labelsCovering(tokenIndex: number): { layer: LayerName; label: LabelPayload }[] {
    const out: { layer: LayerName; label: LabelPayload }[] = [];
    const token = this.state.sentence?.tokens[tokenIndex];
    const aset = this.state.aset;
    if (!token || !aset) return out;
    for (const layer of LAYERS) {
      if (!this.state.layerVisible[layer]) continue;
      for (const label of aset.layers[layer] ?? []) {
        if (label.start === undefined || label.end === undefined || label.segref !== undefined) {
          continue;
        }
        if (label.start <= token.span[0] && token.span[1] <= label.end) {
          out.push({ layer, label });
        }
      }
    }
    return out;
  }

  // -- DOM --------------------------------------------------------------------

  private buildSkeleton(): void {
    this.root.replaceChildren(
      el("div", { id: "banner" }),
      el("div", { id: "conflict-dialog", class: "dialog hidden" }, [
        el("p", {}, ["This annotation set changed on the server (stale revision)."]),
        el("button", { id: "btn-reload" }, ["Reload server state"]),
      ]),
      el("div", { class: "columns" }, [
        el("aside", { id: "sentences" }),
        el("main", {}, [
          el("div", { id: "sentence-view", dir: "rtl" }),
          el("div", { id: "layer-toggles" }),
          el("div", { id: "labels-view" }),
          el("div", { id: "frame-panel" }),
          el("div", { id: "fe-panel" }),
          el("div", { id: "segment-picker" }),
          el("div", { id: "actions" }),
          el("div", { id: "violations" }),
          el("pre", { id: "rules-view" }),
        ]),
      ]),
    );
    const reload = this.root.querySelector<HTMLButtonElement>("#btn-reload");
    reload?.addEventListener("click", () => this.reloadAset());
    this.root.addEventListener("mouseup", () => {
      this.dragging = false;
    });
  }

  private section(id: string): HTMLElement {
    const node = this.root.querySelector<HTMLElement>(`#${id}`);
    if (!node) throw new Error(`missing section ${id}`);
    return node;
  }

  private showConflictDialog(): void {
    this.section("conflict-dialog").classList.remove("hidden");
  }

  private hideConflictDialog(): void {
    this.section("conflict-dialog").classList.add("hidden");
  }

  private showRetryBanner(message: string, task: () => Promise<void>): void {
    const banner = this.section("banner");
    const retry = el("button", { id: "btn-retry" }, ["Retry"]);
    retry.addEventListener("click", () => {
      banner.replaceChildren();
      this.run(task);
    });
    banner.replaceChildren(
      el("span", { class: "error" }, [`Request failed: ${message} `]),
      retry,
    );
  }

  render(): void {
    this.renderSentenceList();
    this.renderSentence();
    this.renderLayerToggles();
    this.renderLabels();
    this.renderFramePanel();
    this.renderFePanel();
    this.renderSegmentPicker();
    this.renderActions();
    this.renderViolations();
    this.section("rules-view").textContent = this.state.rulesXml;
  }

  private renderSentenceList(): void {
    const aside = this.section("sentences");
    aside.replaceChildren(
      el("h3", {}, ["Sentences"]),
      ...this.state.sentenceIds.map((sid) => {
        const btn = el(
          "button",
          {
            class:
              "sentence-link" +
              (this.state.sentence?.sentence_id === sid ? " active" : ""),
            "data-sentence": sid,
          },
          [sid],
        );
        btn.addEventListener("click", () => this.openSentence(sid));
        return btn;
      }),
    );
  }

  private renderSentence(): void {
    const view = this.section("sentence-view");
    const sentence = this.state.sentence;
    if (!sentence) {
      view.replaceChildren(el("p", { class: "empty" }, ["Pick a sentence to annotate."]));
      return;
    }
    if (!sentence.tokens.length) {
      view.replaceChildren(el("p", { class: "empty" }, ["This sentence has no tokens."]));
      return;
    }
    const target = this.targetSpan();
    const nodes: Node[] = [];
    for (const [i, token] of sentence.tokens.entries()) {
      const classes = ["token"];
      if (target && token.span[0] >= target[0] && token.span[1] <= target[1]) {
        classes.push("target");
      }
      const sel = this.state.selection;
      if (sel && i >= sel.start && i <= sel.end) classes.push("selected");
      for (const { layer } of this.labelsCovering(i)) {
        classes.push(`layer-${layer}`);
      }
      const node = el(
        "span",
        { class: classes.join(" "), "data-token": String(i), title: token.pos_display },
        [token.surface],
      );
      node.addEventListener("mousedown", (event) => {
        event.preventDefault();
        if (!this.state.aset) {
          this.pickTarget(i);
          return;
        }
        this.dragging = true;
        this.dragStart = i;
        this.state.selection = { start: i, end: i };
        this.state.pendingSegment = null;
        this.render();
      });
      node.addEventListener("mouseover", () => {
        if (!this.dragging) return;
        this.state.selection = {
          start: Math.min(this.dragStart, i),
          end: Math.max(this.dragStart, i),
        };
        this.render();
      });
      nodes.push(node, document.createTextNode(" "));
    }
    view.replaceChildren(...nodes);
  }

  private renderLayerToggles(): void {
    const bar = this.section("layer-toggles");
    bar.replaceChildren(
      ...LAYERS.map((layer) => {
        const input = el("input", {
          type: "checkbox",
          id: `toggle-${layer}`,
        }) as HTMLInputElement;
        input.checked = this.state.layerVisible[layer];
        input.addEventListener("change", () => this.toggleLayer(layer));
        return el("label", { class: `toggle toggle-${layer}` }, [input, layer]);
      }),
    );
  }

  private renderLabels(): void {
    const view = this.section("labels-view");
    const aset = this.state.aset;
    const sentence = this.state.sentence;
    view.replaceChildren();
    if (!aset || !sentence) return;
    for (const layer of LAYERS) {
      if (!this.state.layerVisible[layer]) continue;
      const labels = aset.layers[layer] ?? [];
      if (!labels.length) continue;
      const row = el("div", { class: `layer-row layer-${layer}` }, [
        el("span", { class: "layer-name" }, [layer]),
      ]);
      for (const label of labels) {
        const key = `${layer}|${anchorKey(label)}`;
        const origin = this.state.humanEntered.has(key) ? "human" : "auto";
        let anchorText: string;
        if (label.segref !== undefined) {
          anchorText = `clitic ${label.segref.split("#")[1] ?? ""}`;
        } else if (label.itype !== undefined) {
          anchorText = label.itype;
        } else {
          anchorText = sentence.text.slice(label.start, label.end);
        }
        row.append(
          el("span", { class: `chip chip-${origin}`, "data-key": key }, [
            el("bdi", {}, [anchorText]),
            el("b", {}, [label.value || "–"]),
            ...(label.prep ? [el("i", {}, [`(${label.prep})`])] : []),
          ]),
        );
      }
      view.append(row);
    }
  }

  private renderFramePanel(): void {
    const panel = this.section("frame-panel");
    panel.replaceChildren();
    if (this.state.pendingTarget !== null && !this.state.aset) {
      panel.append(el("h3", {}, ["Frame suggestions"]));
      if (!this.state.suggestions.length) {
        panel.append(el("p", { class: "empty" }, ["No suggestions; pick any frame from the database."]));
      }
      for (const frame of this.state.suggestions) {
        const btn = el("button", { class: "frame-option", "data-frame": frame.name }, [
          frame.name,
        ]);
        btn.addEventListener("click", () => this.pickFrame(frame.name));
        panel.append(btn);
      }
    }
    const frame = this.state.frame;
    if (frame) {
      panel.append(
        el("h3", {}, [`Frame: ${frame.name}`]),
        el("p", { class: "definition" }, [frame.definition]),
      );
      const exemplars = el("div", { class: "exemplars" });
      for (const ex of frame.exemplars) {
        const line = el("p", { class: "exemplar" });
        line.append(el("span", {}, [ex.text]));
        line.append(
          el("small", {}, [
            " — " + ex.labels.map((l) => `${l.fe}: “${ex.text.slice(l.start, l.end)}”`).join(", "),
          ]),
        );
        exemplars.append(line);
      }
      if (frame.exemplars.length) {
        panel.append(el("h4", {}, ["Annotated samples"]), exemplars);
      }
    }
  }

  private renderFePanel(): void {
    const panel = this.section("fe-panel");
    panel.replaceChildren();
    const frame = this.state.frame;
    if (!frame || !this.state.aset) return;
    const armed = this.state.selection !== null || this.state.pendingSegment !== null;
    panel.append(
      el("h4", {}, [
        armed ? "Assign a frame element to the selection" : "Select a span (or clitic) first",
      ]),
    );
    for (const fe of frame.fes) {
      const btn = el(
        "button",
        { class: `fe-option core-${fe.core}`, "data-fe": fe.name },
        [fe.name],
      ) as HTMLButtonElement;
      btn.disabled = !armed;
      btn.addEventListener("click", () => this.assignFE(fe.name));
      panel.append(btn);
    }
    const nullRow = el("div", { class: "null-row" }, [
      el("small", {}, ["Mark unexpressed core element: "]),
    ]);
    for (const fe of frame.fes.filter((f) => f.core === "core")) {
      const btn = el("button", { class: "null-option", "data-null-fe": fe.name }, [`${fe.name}∅`]);
      btn.addEventListener("click", () => this.markNullInstantiated(fe.name, "CNI"));
      nullRow.append(btn);
    }
    panel.append(nullRow);
  }

  private renderSegmentPicker(): void {
    const panel = this.section("segment-picker");
    panel.replaceChildren();
    const sentence = this.state.sentence;
    const target = this.targetSpan();
    if (!sentence || !target || !this.state.aset) return;
    const token = sentence.tokens.find((t) => t.span[0] === target[0] && t.span[1] === target[1]);
    if (!token || token.segments.length <= 1) return;
    panel.append(el("h4", {}, ["Incorporated segments of the target"]));
    for (const [k, seg] of token.segments.entries()) {
      const active = this.state.pendingSegment === k ? " active" : "";
      const btn = el(
        "button",
        { class: `segment-option${active}`, "data-segment": String(k) },
        [el("bdi", {}, [seg.surface]), ` ${seg.pos} (${seg.role})`],
      );
      btn.addEventListener("click", () => this.pickSegment(k));
      panel.append(btn);
    }
  }

  private renderActions(): void {
    const bar = this.section("actions");
    bar.replaceChildren();
    const aset = this.state.aset;
    if (!aset) return;
    const status = el("span", { class: `status status-${aset.status}` }, [
      `${aset.aset_id} rev ${aset.revision} · voice ${aset.voice} · ${aset.status}`,
    ]);
    const autofill = el("button", { id: "btn-autofill" }, ["Auto-fill GF/PT/Sumo"]);
    autofill.addEventListener("click", () => this.runAutofill());
    const validateBtn = el("button", { id: "btn-validate" }, ["Validate"]);
    validateBtn.addEventListener("click", () => this.runValidate());
    const mine = el("button", { id: "btn-mine" }, ["Mine rules"]);
    mine.addEventListener("click", () => this.runMine());
    const reviewed = el("button", { id: "btn-reviewed" }, ["Mark human-verified"]);
    reviewed.addEventListener("click", () => this.markReviewed());
    bar.append(status, autofill, validateBtn, mine, reviewed);
  }

  private renderViolations(): void {
    const box = this.section("violations");
    box.replaceChildren();
    if (!this.state.aset) return;
    if (!this.state.violations.length) {
      box.append(el("p", { class: "ok" }, ["No violations reported."]));
      return;
    }
    for (const v of this.state.violations) {
      box.append(el("p", { class: "violation" }, [`${v.kind}: ${v.message}`]));
    }
  }
}
