/**
 * Chat controller for one session. Assistant text is only shown as final once
 * the server confirms it; after every reply the transcript is reconciled with
 * a fresh GET so the UI mirrors the server exactly.
 */

import type { ApiClient, ChatMessage } from "./api.js";

export interface ChatView {
  transcript: ChatMessage[];
  pending: string | null;
  error: string | null;
}

export class ChatController {
  private view: ChatView = { transcript: [], pending: null, error: null };

  constructor(
    private readonly api: ApiClient,
    private sessionId: string | null = null,
    private readonly onChange: (view: ChatView) => void = () => undefined,
  ) {}

  get state(): ChatView {
    return this.view;
  }

  get session(): string | null {
    return this.sessionId;
  }

  private update(patch: Partial<ChatView>): void {
    this.view = { ...this.view, ...patch };
    this.onChange(this.view);
  }

  async open(modelId: string, feature?: string): Promise<void> {
    const session = await this.api.createSession(modelId, feature);
    this.sessionId = session.session_id;
    this.update({ transcript: session.transcript, pending: null, error: null });
  }

  async resume(sessionId: string): Promise<void> {
    const session = await this.api.getSession(sessionId);
    this.sessionId = session.session_id;
    this.update({ transcript: session.transcript, pending: null, error: null });
  }

  /**
   * Send one question. The reply is appended only after the server confirms
   * it, and the transcript is then reconciled with the server's copy.
   */
  async send(text: string): Promise<ChatMessage> {
    if (!this.sessionId) throw new Error("no active session");
    if (!text.trim()) throw new Error("message must be non-empty");
    this.update({ pending: text, error: null });
    try {
      const response = await this.api.postMessage(this.sessionId, text);
      const server = await this.api.getSession(this.sessionId); // reconcile
      this.update({ transcript: server.transcript, pending: null });
      return response.reply;
    } catch (err) {
      // transcript unchanged: the unconfirmed question is surfaced as an error
      this.update({ pending: null, error: String(err) });
      throw err;
    }
  }
}
