// Library filter/pagination state and the briefcase attachment list.

import type { LibraryQuery } from "./types";

export class LibraryState {
  kind = "";
  q = "";
  sort: "title" | "year" | "kind" = "title";
  dir: "asc" | "desc" = "asc";
  offset = 0;
  limit = 20;
  total = 0;

  toQuery(): LibraryQuery {
    const query: LibraryQuery = {
      sort: this.sort,
      dir: this.dir,
      offset: this.offset,
      limit: this.limit,
    };
    if (this.kind) query.kind = this.kind;
    if (this.q) query.q = this.q;
    return query;
  }

  toggleSort(key: "title" | "year" | "kind"): void {
    if (this.sort === key) {
      this.dir = this.dir === "asc" ? "desc" : "asc";
    } else {
      this.sort = key;
      this.dir = "asc";
    }
    this.offset = 0;
  }

  get page(): number {
    return Math.floor(this.offset / this.limit) + 1;
  }

  get pageCount(): number {
    return Math.max(1, Math.ceil(this.total / this.limit));
  }

  nextPage(): boolean {
    if (this.offset + this.limit >= this.total) return false;
    this.offset += this.limit;
    return true;
  }

  prevPage(): boolean {
    if (this.offset === 0) return false;
    this.offset = Math.max(0, this.offset - this.limit);
    return true;
  }
}

export interface BriefcaseEntry {
  docId: string;
  title: string;
  chunks: number;
  attached: boolean;
}

export class BriefcaseState {
  entries: BriefcaseEntry[] = [];

  add(docId: string, title: string, chunks: number): void {
    this.entries.push({ docId, title, chunks, attached: false });
  }

  toggleAttached(docId: string): void {
    const entry = this.entries.find((e) => e.docId === docId);
    if (entry) entry.attached = !entry.attached;
  }

  attachedIds(): string[] {
    return this.entries.filter((e) => e.attached).map((e) => e.docId);
  }
}
