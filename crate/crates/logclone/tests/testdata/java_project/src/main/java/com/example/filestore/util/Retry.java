package com.example.filestore.util;

import java.io.IOException;
import java.util.concurrent.Callable;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/**
 * Runs an action with bounded retries and exponential backoff.
 */
public final class Retry {

    private static final Logger LOG = LoggerFactory.getLogger(Retry.class);

    private Retry() {
    }

    public static <T> T withRetries(Callable<T> action, int maxRetries, long initialDelayMs)
            throws Exception {
        long delay = initialDelayMs;
        Exception last = null;
        for (int attempt = 1; attempt <= maxRetries; attempt++) {
            try {
                return action.call();
            } catch (IOException e) {
                last = e;
                LOG.warn("Attempt {} of {} failed, retrying in {} ms", attempt, maxRetries, delay);
                Thread.sleep(delay);
                delay *= 2;
            }
        }
        LOG.error("Giving up after " + maxRetries + " attempts", last);
        throw last;
    }

    public static void sleepQuietly(long millis) {
        try {
            Thread.sleep(millis);
        } catch (InterruptedException e) {
            Thread.currentThread().interrupt();
        }
    }
}
