import { readFileSync } from "node:fs";
import { join } from "node:path";

function fixturePath(name: string): string {
  // vitest runs with the frontend directory as cwd
  return join(process.cwd(), "tests", "fixtures", name);
}

export function loadGolden<T>(name: string): T {
  return JSON.parse(readFileSync(fixturePath(name), "utf-8")) as T;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export async function flushAsync(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

export function click(element: Element): void {
  element.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}
