// "Was this helpful?" widget: up submits immediately, down opens a reason
// picker; one vote per query, after which the widget locks.

import type { DownvoteReason, FeedbackRequest } from "./types";

export type VotePhase = "ready" | "picking_reason" | "submitting" | "locked";

export type SubmitVote = (body: FeedbackRequest) => Promise<number>;

export class VoteWidget {
  phase: VotePhase = "ready";
  message = "";

  constructor(
    private queryId: string,
    private submit: SubmitVote,
  ) {}

  async voteUp(): Promise<void> {
    if (this.phase !== "ready") return;
    await this.send({ query_id: this.queryId, direction: "up" });
  }

  openReasonPicker(): void {
    if (this.phase !== "ready") return;
    this.phase = "picking_reason";
  }

  cancelReasonPicker(): void {
    if (this.phase === "picking_reason") this.phase = "ready";
  }

  async voteDown(reason: DownvoteReason, freeText?: string): Promise<void> {
    if (this.phase !== "picking_reason" && this.phase !== "ready") return;
    const body: FeedbackRequest = { query_id: this.queryId, direction: "down", reason };
    if (freeText && freeText.trim()) body.free_text = freeText.trim();
    await this.send(body);
  }

  private async send(body: FeedbackRequest): Promise<void> {
    this.phase = "submitting";
    let status: number;
    try {
      status = await this.submit(body);
    } catch (err) {
      this.phase = "ready";
      this.message = err instanceof Error ? err.message : "vote failed";
      return;
    }
    if (status === 204) {
      this.phase = "locked";
      this.message = "Thanks for the feedback.";
    } else if (status === 409) {
      this.phase = "locked";
      this.message = "You already voted on this answer.";
    } else {
      this.phase = "ready";
      this.message = `vote failed (${status})`;
    }
  }
}
