// DOM wiring for the ask, document, library, and briefcase panels.
//
// API calls are injected so tests can drive full flows against fixtures
// without a network.

import * as api from "./api";
import { AskView } from "./askview";
import { highlightSpan } from "./highlight";
import { BriefcaseState, LibraryState } from "./library";
import { VoteWidget } from "./vote";
import type { ApiClient } from "./api";
import type { AskMode, CitationFrame, DocumentFull } from "./types";
import { DOWNVOTE_REASONS } from "./types";

export interface ApiDeps {
  askStream: typeof api.askStream;
  getDocument: typeof api.getDocument;
  libraryList: typeof api.libraryList;
  uploadBriefcase: typeof api.uploadBriefcase;
  postFeedback: typeof api.postFeedback;
}

const DEFAULT_DEPS: ApiDeps = {
  askStream: api.askStream,
  getDocument: api.getDocument,
  libraryList: api.libraryList,
  uploadBriefcase: api.uploadBriefcase,
  postFeedback: api.postFeedback,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export class App {
  view = new AskView();
  vote: VoteWidget | null = null;
  library = new LibraryState();
  briefcase = new BriefcaseState();
  mode: AskMode = "research";

  private answerPane: HTMLElement;
  private banner: HTMLElement;
  private votePane: HTMLElement;
  private docPane: HTMLElement;
  private libraryPane: HTMLElement;
  private briefcasePane: HTMLElement;
  private queryInput: HTMLTextAreaElement;
  private magicToggle: HTMLInputElement;
  private tabs: HTMLElement;

  constructor(
    root: HTMLElement,
    private client: ApiClient,
    private deps: ApiDeps = DEFAULT_DEPS,
  ) {
    root.classList.add("app");

    const askSection = el("section", "ask-panel");
    this.tabs = el("nav", "mode-tabs");
    for (const mode of ["research", "review", "draft"] as AskMode[]) {
      const tab = el("button", "tab", mode);
      tab.dataset.mode = mode;
      tab.addEventListener("click", () => this.setMode(mode));
      this.tabs.appendChild(tab);
    }
    askSection.appendChild(this.tabs);

    this.queryInput = el("textarea", "query-input");
    this.queryInput.placeholder = "Ask a legal question";
    askSection.appendChild(this.queryInput);

    const controls = el("div", "ask-controls");
    const magicLabel = el("label", "magic-toggle");
    this.magicToggle = el("input");
    this.magicToggle.type = "checkbox";
    magicLabel.appendChild(this.magicToggle);
    magicLabel.appendChild(document.createTextNode(" refine my query"));
    controls.appendChild(magicLabel);
    const askButton = el("button", "ask-button", "Ask");
    askButton.addEventListener("click", () => void this.submitQuery());
    controls.appendChild(askButton);
    askSection.appendChild(controls);

    this.banner = el("div", "banner hidden");
    askSection.appendChild(this.banner);
    this.answerPane = el("article", "answer");
    askSection.appendChild(this.answerPane);
    this.votePane = el("div", "vote hidden");
    askSection.appendChild(this.votePane);

    this.docPane = el("aside", "doc-pane hidden");
    this.libraryPane = el("section", "library-panel");
    this.briefcasePane = el("section", "briefcase-panel");

    root.appendChild(askSection);
    root.appendChild(this.docPane);
    root.appendChild(this.libraryPane);
    root.appendChild(this.briefcasePane);

    this.renderTabs();
    this.renderBriefcase();
  }

  setMode(mode: AskMode): void {
    this.mode = mode;
    this.renderTabs();
  }

  private renderTabs(): void {
    for (const tab of this.tabs.querySelectorAll<HTMLButtonElement>(".tab")) {
      tab.classList.toggle("active", tab.dataset.mode === this.mode);
    }
  }

  async submitQuery(): Promise<void> {
    const query = this.queryInput.value.trim();
    if (!query || this.view.status === "streaming") return;
    this.view.start();
    this.vote = null;
    this.banner.classList.add("hidden");
    this.votePane.classList.add("hidden");
    this.renderAnswer();
    try {
      await this.deps.askStream(
        this.client,
        {
          query,
          mode: this.mode,
          magic: this.magicToggle.checked,
          attachments: this.briefcase.attachedIds(),
        },
        (frame) => {
          this.view.apply(frame);
          this.renderAnswer();
        },
      );
    } catch (err) {
      this.view.apply({
        type: "error",
        message: err instanceof Error ? err.message : String(err),
      });
    }
    this.renderAnswer();
    if (this.view.status === "error") {
      this.banner.textContent = `The answer failed: ${this.view.errorMessage}`;
      this.banner.classList.remove("hidden");
    }
    if (this.view.voteReady) {
      this.vote = new VoteWidget(this.view.queryId!, (body) =>
        this.deps.postFeedback(this.client, body),
      );
      this.renderVote();
      this.votePane.classList.remove("hidden");
    }
  }

  renderAnswer(): void {
    this.answerPane.textContent = "";
    for (const segment of this.view.segments()) {
      if (segment.kind === "text") {
        this.answerPane.appendChild(document.createTextNode(segment.text));
      } else {
        this.answerPane.appendChild(this.chipElement(segment.ordinal, segment.citation));
      }
    }
  }

  private chipElement(ordinal: number, citation: CitationFrame | null): HTMLButtonElement {
    const chip = el("button", "chip", String(ordinal));
    chip.dataset.ordinal = String(ordinal);
    if (citation) {
      chip.title = citation.doc_title;
      chip.addEventListener("click", () => void this.openCitation(ordinal));
    } else {
      chip.disabled = true;
      chip.classList.add("chip-disabled");
      chip.title = "This citation could not be resolved";
    }
    return chip;
  }

  async openCitation(ordinal: number): Promise<void> {
    const citation = this.view.chips.get(ordinal);
    if (!citation) return;
    const doc = await this.deps.getDocument(this.client, citation.doc_id);
    this.renderDocument(doc, citation.start, citation.end);
  }

  async openDocument(docId: string): Promise<void> {
    const doc = await this.deps.getDocument(this.client, docId);
    this.renderDocument(doc, null, null);
  }

  renderDocument(doc: DocumentFull, byteStart: number | null, byteEnd: number | null): void {
    this.docPane.textContent = "";
    this.docPane.classList.remove("hidden");
    const header = el("header", "doc-header");
    header.appendChild(el("h2", "", doc.title));
    if (doc.citation_label) header.appendChild(el("p", "doc-citation", doc.citation_label));
    this.docPane.appendChild(header);
    const body = el("div", "doc-body");
    if (byteStart !== null && byteEnd !== null) {
      const { before, highlight, after } = highlightSpan(doc.body, byteStart, byteEnd);
      body.appendChild(document.createTextNode(before));
      const mark = el("mark", "passage-highlight", highlight);
      body.appendChild(mark);
      body.appendChild(document.createTextNode(after));
      queueMicrotask(() => mark.scrollIntoView?.({ block: "center" }));
    } else {
      body.textContent = doc.body;
    }
    this.docPane.appendChild(body);
  }

  renderVote(): void {
    this.votePane.textContent = "";
    if (!this.vote) return;
    const widget = this.vote;
    this.votePane.appendChild(el("span", "vote-label", "Was this helpful?"));
    if (widget.phase === "ready") {
      const up = el("button", "vote-up", "Yes");
      up.addEventListener("click", () => {
        void widget.voteUp().then(() => this.renderVote());
      });
      const down = el("button", "vote-down", "No");
      down.addEventListener("click", () => {
        widget.openReasonPicker();
        this.renderVote();
      });
      this.votePane.appendChild(up);
      this.votePane.appendChild(down);
    } else if (widget.phase === "picking_reason") {
      const picker = el("div", "reason-picker");
      const freeText = el("input", "reason-free-text");
      freeText.placeholder = "Tell us more (optional)";
      for (const reason of DOWNVOTE_REASONS) {
        const btn = el("button", "reason", reason.label);
        btn.dataset.reason = reason.value;
        btn.addEventListener("click", () => {
          void widget.voteDown(reason.value, freeText.value).then(() => this.renderVote());
        });
        picker.appendChild(btn);
      }
      picker.appendChild(freeText);
      this.votePane.appendChild(picker);
    } else if (widget.phase === "locked") {
      this.votePane.appendChild(el("span", "vote-locked", widget.message));
    } else {
      this.votePane.appendChild(el("span", "vote-pending", "Sending..."));
    }
  }

  async refreshLibrary(): Promise<void> {
    const page = await this.deps.libraryList(this.client, this.library.toQuery());
    this.library.total = page.total;
    this.libraryPane.textContent = "";
    this.libraryPane.appendChild(el("h2", "", "Library"));
    const list = el("ul", "library-list");
    for (const item of page.items) {
      const row = el("li", "library-row");
      const link = el("button", "library-title", item.title);
      link.addEventListener("click", () => void this.openDocument(item.doc_id));
      row.appendChild(link);
      row.appendChild(el("span", "library-meta", `${item.kind}${item.year ? " · " + item.year : ""}`));
      list.appendChild(row);
    }
    this.libraryPane.appendChild(list);
    this.libraryPane.appendChild(
      el("p", "library-pages", `page ${this.library.page} of ${this.library.pageCount}`),
    );
  }

  async uploadToBriefcase(title: string, text: string): Promise<void> {
    const result = await this.deps.uploadBriefcase(this.client, title, text);
    this.briefcase.add(result.doc_id, title, result.chunks);
    this.renderBriefcase();
  }

  renderBriefcase(): void {
    this.briefcasePane.textContent = "";
    this.briefcasePane.appendChild(el("h2", "", "Briefcase"));
    const list = el("ul", "briefcase-list");
    for (const entry of this.briefcase.entries) {
      const row = el("li", "briefcase-row");
      const attach = el("input");
      attach.type = "checkbox";
      attach.checked = entry.attached;
      attach.dataset.docId = entry.docId;
      attach.addEventListener("change", () => this.briefcase.toggleAttached(entry.docId));
      row.appendChild(attach);
      row.appendChild(el("span", "briefcase-title", `${entry.title} (${entry.chunks} chunks)`));
      list.appendChild(row);
    }
    this.briefcasePane.appendChild(list);
  }
}
